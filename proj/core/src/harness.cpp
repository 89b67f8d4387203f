#include "gridfdi/harness.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "attack_detail.hpp"
#include "gridfdi/cases.hpp"
#include "gridfdi/errors.hpp"
#include "gridfdi/netmodel.hpp"
#include "gridfdi/version.hpp"

namespace gridfdi::harness {

CaseStudyId case_study_from_string(const std::string& s) {
  if (s == "C1") return CaseStudyId::C1;
  if (s == "C2") return CaseStudyId::C2;
  if (s == "C3") return CaseStudyId::C3;
  if (s == "C4.1") return CaseStudyId::C4_1;
  if (s == "C4.2") return CaseStudyId::C4_2;
  if (s == "C4.3") return CaseStudyId::C4_3;
  throw ValidationError("unknown case study '" + s + "'");
}

const char* to_string(CaseStudyId id) {
  switch (id) {
    case CaseStudyId::C1: return "C1";
    case CaseStudyId::C2: return "C2";
    case CaseStudyId::C3: return "C3";
    case CaseStudyId::C4_1: return "C4.1";
    case CaseStudyId::C4_2: return "C4.2";
    case CaseStudyId::C4_3: return "C4.3";
  }
  return "?";
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string mode_display(double re, double im) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f %c j%.6f", re, im < 0 ? '-' : '+', std::abs(im));
  return buf;
}

std::vector<std::pair<std::string, std::string>> echo_config(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("case_source", cfg.case_source);
  e.emplace_back("case_hash", std::to_string(fnv1a(cfg.case_text)));
  e.emplace_back("pf_tol", fmt17(cfg.pf.tol));
  e.emplace_back("pf_max_iter", std::to_string(cfg.pf.max_iter));
  e.emplace_back("trials", std::to_string(cfg.trials));
  e.emplace_back("seed", std::to_string(cfg.seed));
  e.emplace_back("jobs", std::to_string(cfg.jobs));
  e.emplace_back("dist", cfg.dist_spec.empty() ? "default" : cfg.dist_spec);
  e.emplace_back("mask", cfg.mask_spec.empty() ? "full" : cfg.mask_spec);
  e.emplace_back("epsilon_unstable", fmt17(cfg.synth.epsilon_unstable));
  e.emplace_back("weight_p", fmt17(cfg.synth.weight_p));
  e.emplace_back("weight_v", fmt17(cfg.synth.weight_v));
  e.emplace_back("load_box_factor", fmt17(cfg.synth.load_box_factor));
  e.emplace_back("load_box_floor_mw", fmt17(cfg.synth.load_box_floor_mw));
  e.emplace_back("dp_g_box_pu", fmt17(cfg.synth.dp_g_box_pu));
  e.emplace_back("dv_g_box_pu", fmt17(cfg.synth.dv_g_box_pu));
  e.emplace_back("penalty_initial", fmt17(cfg.synth.penalty_initial));
  e.emplace_back("penalty_growth", fmt17(cfg.synth.penalty_growth));
  e.emplace_back("max_outer", std::to_string(cfg.synth.max_outer));
  e.emplace_back("inner_tol", fmt17(cfg.synth.inner_tol));
  e.emplace_back("max_inner", std::to_string(cfg.synth.max_inner));
  e.emplace_back("multi_start", std::to_string(cfg.synth.multi_start));
  e.emplace_back("smoothing_beta", fmt17(cfg.synth.smoothing_beta));
  e.emplace_back("ray_steps", std::to_string(cfg.synth.ray_steps));
  return e;
}

void fill_operating_point(Report& r, const pf::OperatingPoint& op,
                          const net::NetworkCase& c) {
  r.pf_converged = op.converged;
  r.pf_iterations = op.iterations;
  r.pf_mismatch = op.mismatch;
  r.slack_p_mw = op.slack_p * c.base_mva;
  r.slack_q_mvar = op.slack_q * c.base_mva;
  if (op.v.size() != static_cast<Eigen::Index>(c.buses.size())) return;
  const auto bounds = pf::check_voltage_bounds(op, c);
  for (const auto& b : c.buses) {
    const auto v = op.v(c.bus_index(b.id));
    r.bus_ids.push_back(b.id);
    r.v_mag.push_back(std::abs(v));
    r.v_ang_deg.push_back(std::arg(v) * 180.0 / std::numbers::pi);
  }
  for (const auto& ck : bounds) r.bound_pass.push_back(ck.pass);
}

void fill_modes(Report& r, const sss::EigenSolution& eig) {
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    Report::Mode m;
    m.re = eig.eigenvalues(k).real();
    m.im = eig.eigenvalues(k).imag();
    m.display = mode_display(m.re, m.im);
    m.unstable = m.re > sss::kAnalysisMargin;
    r.modes.push_back(std::move(m));
  }
  r.spectral_abscissa = eig.spectral_abscissa;
  r.unstable = eig.unstable;
  r.verdict = eig.unstable ? "unstable" : "stable";
}

std::vector<std::string> load_labels(const net::NetworkCase& c) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < c.loads.size(); ++k)
    out.push_back("L" + std::to_string(k + 1));
  return out;
}

Report base_report(const RunConfig& cfg, const std::string& kind,
                   const std::string& case_study) {
  Report r;
  r.tool_version = kVersion;
  r.kind = kind;
  r.case_study = case_study;
  r.config = echo_config(cfg);
  r.seed = cfg.seed;
  return r;
}

Report analyze_impl(const RunConfig& cfg, const std::string& kind,
                    const std::string& case_study) {
  const auto c = net::parse_case(cfg.case_text);
  const auto ybus = net::build_ybus(c);
  const auto partition = net::partition_ybus(ybus, c);
  const auto raw =
      attack::detail::evaluate_raw(c, ybus, partition, cfg.pf, nullptr, nullptr);

  Report r = base_report(cfg, kind, case_study);
  fill_operating_point(r, raw.op, c);
  if (raw.ok) {
    fill_modes(r, *raw.eig);
  } else if (raw.pf_ok) {
    r.verdict = "reduction-failed";
  } else {
    r.verdict = "diverged";
  }
  return r;
}

Report campaign_report(const RunConfig& cfg) {
  const auto c = net::parse_case(cfg.case_text);
  const auto ctx = attack::make_context(c, cfg.pf);
  const auto dist = cfg.dist_spec.empty()
                        ? attack::UniformDist::default_for(c)
                        : attack::parse_dist_spec(cfg.dist_spec, c.loads.size());
  const auto mask = cfg.mask_spec.empty()
                        ? attack::AccessMask::full(c.loads.size())
                        : attack::parse_mask_spec(cfg.mask_spec, c.loads.size());
  const auto stats =
      attack::monte_carlo_campaign(ctx, cfg.trials, dist, mask, cfg.seed, cfg.jobs);

  Report r = base_report(cfg, "casestudy", "C2");
  fill_operating_point(r, ctx.base_op, c);
  fill_modes(r, ctx.base_eig);
  r.load_labels = load_labels(c);
  r.has_campaign = true;
  r.trials = stats.trials;
  r.successes = stats.successes;
  r.stables = stats.stables;
  r.divergences = stats.divergences;
  r.success_rate = stats.success_rate;
  r.histograms = stats.histograms;
  for (const auto& s : stats.successful) {
    Report::SuccessRow row;
    row.trial = s.trial;
    row.dp_mw = s.attack.dp_mw;
    row.dq_mvar = s.attack.dq_mvar;
    row.abscissa = s.abscissa;
    r.success_vectors.push_back(std::move(row));
  }
  return r;
}

Report synthesis_report(const RunConfig& cfg, const std::string& case_study,
                        const attack::AccessMask& mask) {
  const auto c = net::parse_case(cfg.case_text);
  const auto ctx = attack::make_context(c, cfg.pf);
  attack::SynthesisOptions opt = cfg.synth;
  opt.seed = cfg.seed;
  const auto res = attack::synthesize_attack(ctx, mask, opt);

  Report r = base_report(cfg, "casestudy", case_study);
  fill_operating_point(r, res.op, c);
  if (res.eig) fill_modes(r, *res.eig);
  r.has_attack = true;
  r.load_labels = load_labels(c);
  r.attack_dp_mw = res.attack.dp_mw;
  r.attack_dq_mvar = res.attack.dq_mvar;
  const int slack = c.slack_bus();
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const std::string label = "G" + std::to_string(k + 1);
    r.gen_labels.push_back(label);
    if (c.generators[k].bus != slack) r.nonslack_gen_labels.push_back(label);
  }
  r.deviation_dp_g_mw = res.deviation.dp_g_mw;
  r.deviation_dv_g_pu = res.deviation.dv_g_pu;
  r.objective = res.objective;
  r.feasible = res.feasible;
  r.trace = res.trace;
  return r;
}

}  // namespace

Report analyze(const RunConfig& config) { return analyze_impl(config, "analyze", ""); }

Report run_case_study(CaseStudyId id, const RunConfig& config) {
  switch (id) {
    case CaseStudyId::C1:
      return analyze_impl(config, "casestudy", "C1");
    case CaseStudyId::C2:
      return campaign_report(config);
    case CaseStudyId::C3: {
      const auto c = net::parse_case(config.case_text);
      const auto mask = config.mask_spec.empty()
                            ? attack::AccessMask::full(c.loads.size())
                            : attack::parse_mask_spec(config.mask_spec, c.loads.size());
      return synthesis_report(config, "C3", mask);
    }
    case CaseStudyId::C4_1:
    case CaseStudyId::C4_2:
    case CaseStudyId::C4_3: {
      const auto c = net::parse_case(config.case_text);
      attack::AccessMask mask = attack::AccessMask::none(c.loads.size());
      if (!config.mask_spec.empty()) {
        mask = attack::parse_mask_spec(config.mask_spec, c.loads.size());
      } else {
        const auto scen = attack::masked_scenarios(c);
        mask = (id == CaseStudyId::C4_1) ? scen.c41
               : (id == CaseStudyId::C4_2) ? scen.c42
                                           : scen.c43;
      }
      return synthesis_report(config, to_string(id), mask);
    }
  }
  throw ValidationError("unknown case study");
}

}  // namespace gridfdi::harness
