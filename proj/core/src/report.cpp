#include <cstdio>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridfdi/errors.hpp"
#include "gridfdi/harness.hpp"

namespace gridfdi::harness {

using json = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string report_to_json(const Report& r) {
  json root;
  root["tool"] = {{"name", "gridfdi"}, {"version", r.tool_version}};
  root["kind"] = r.kind;
  root["case_study"] = r.case_study;
  json cfg = json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  root["config"] = cfg;
  root["seed"] = r.seed;

  json op;
  op["converged"] = r.pf_converged;
  op["iterations"] = r.pf_iterations;
  op["mismatch"] = r.pf_mismatch;
  op["slack_p_mw"] = r.slack_p_mw;
  op["slack_q_mvar"] = r.slack_q_mvar;
  op["buses"] = json::array();
  for (std::size_t i = 0; i < r.bus_ids.size(); ++i) {
    op["buses"].push_back({{"id", r.bus_ids[i]},
                           {"v_mag", r.v_mag[i]},
                           {"v_ang_deg", r.v_ang_deg[i]},
                           {"bound_pass", static_cast<bool>(r.bound_pass[i])}});
  }
  root["operating_point"] = op;

  json eig;
  eig["modes"] = json::array();
  for (const auto& m : r.modes)
    eig["modes"].push_back(
        {{"re", m.re}, {"im", m.im}, {"display", m.display}, {"unstable", m.unstable}});
  eig["spectral_abscissa"] = r.spectral_abscissa;
  eig["unstable"] = r.unstable;
  eig["verdict"] = r.verdict;
  root["eigenvalues"] = eig;

  if (r.has_attack) {
    json atk;
    atk["loads"] = json::array();
    for (std::size_t i = 0; i < r.load_labels.size(); ++i)
      atk["loads"].push_back({{"label", r.load_labels[i]},
                              {"dp_mw", r.attack_dp_mw[i]},
                              {"dq_mvar", r.attack_dq_mvar[i]}});
    atk["deviation_p"] = json::array();
    for (std::size_t i = 0; i < r.nonslack_gen_labels.size(); ++i)
      atk["deviation_p"].push_back(
          {{"label", r.nonslack_gen_labels[i]}, {"dp_g_mw", r.deviation_dp_g_mw[i]}});
    atk["deviation_v"] = json::array();
    for (std::size_t i = 0; i < r.gen_labels.size(); ++i)
      atk["deviation_v"].push_back(
          {{"label", r.gen_labels[i]}, {"dv_g_pu", r.deviation_dv_g_pu[i]}});
    atk["objective"] = r.objective;
    atk["feasible"] = r.feasible;
    atk["trace"] = json::array();
    for (const auto& t : r.trace)
      atk["trace"].push_back({{"outer", t.outer},
                              {"mu", t.mu},
                              {"objective", t.objective},
                              {"abscissa", t.abscissa},
                              {"violation", t.violation},
                              {"inner_iterations", t.inner_iterations}});
    root["attack"] = atk;
  }

  if (r.has_campaign) {
    json camp;
    camp["trials"] = r.trials;
    camp["successes"] = r.successes;
    camp["stables"] = r.stables;
    camp["divergences"] = r.divergences;
    camp["success_rate"] = r.success_rate;
    camp["histograms"] = json::array();
    for (const auto& h : r.histograms) {
      json jh;
      jh["channel"] = h.channel;
      jh["lo"] = h.lo;
      jh["hi"] = h.hi;
      jh["counts"] = h.counts;
      camp["histograms"].push_back(jh);
    }
    camp["successful"] = json::array();
    for (const auto& s : r.success_vectors)
      camp["successful"].push_back({{"trial", s.trial},
                                    {"dp_mw", s.dp_mw},
                                    {"dq_mvar", s.dq_mvar},
                                    {"abscissa", s.abscissa}});
    root["campaign"] = camp;
  }
  return root.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
  Report r;
  r.tool_version = root.at("tool").at("version").get<std::string>();
  r.kind = root.at("kind").get<std::string>();
  r.case_study = root.at("case_study").get<std::string>();
  for (const auto& [k, v] : root.at("config").items())
    r.config.emplace_back(k, v.get<std::string>());
  r.seed = root.at("seed").get<std::uint64_t>();

  const auto& op = root.at("operating_point");
  r.pf_converged = op.at("converged").get<bool>();
  r.pf_iterations = op.at("iterations").get<int>();
  r.pf_mismatch = op.at("mismatch").get<double>();
  r.slack_p_mw = op.at("slack_p_mw").get<double>();
  r.slack_q_mvar = op.at("slack_q_mvar").get<double>();
  for (const auto& b : op.at("buses")) {
    r.bus_ids.push_back(b.at("id").get<int>());
    r.v_mag.push_back(b.at("v_mag").get<double>());
    r.v_ang_deg.push_back(b.at("v_ang_deg").get<double>());
    r.bound_pass.push_back(b.at("bound_pass").get<bool>());
  }

  const auto& eig = root.at("eigenvalues");
  for (const auto& m : eig.at("modes")) {
    Report::Mode mode;
    mode.re = m.at("re").get<double>();
    mode.im = m.at("im").get<double>();
    mode.display = m.at("display").get<std::string>();
    mode.unstable = m.at("unstable").get<bool>();
    r.modes.push_back(std::move(mode));
  }
  r.spectral_abscissa = eig.at("spectral_abscissa").get<double>();
  r.unstable = eig.at("unstable").get<bool>();
  r.verdict = eig.at("verdict").get<std::string>();

  if (root.contains("attack")) {
    r.has_attack = true;
    const auto& atk = root.at("attack");
    for (const auto& l : atk.at("loads")) {
      r.load_labels.push_back(l.at("label").get<std::string>());
      r.attack_dp_mw.push_back(l.at("dp_mw").get<double>());
      r.attack_dq_mvar.push_back(l.at("dq_mvar").get<double>());
    }
    for (const auto& g : atk.at("deviation_p")) {
      r.nonslack_gen_labels.push_back(g.at("label").get<std::string>());
      r.deviation_dp_g_mw.push_back(g.at("dp_g_mw").get<double>());
    }
    for (const auto& g : atk.at("deviation_v")) {
      r.gen_labels.push_back(g.at("label").get<std::string>());
      r.deviation_dv_g_pu.push_back(g.at("dv_g_pu").get<double>());
    }
    r.objective = atk.at("objective").get<double>();
    r.feasible = atk.at("feasible").get<bool>();
    for (const auto& t : atk.at("trace")) {
      attack::SynthesisResult::OuterLog log;
      log.outer = t.at("outer").get<int>();
      log.mu = t.at("mu").get<double>();
      log.objective = t.at("objective").get<double>();
      log.abscissa = t.at("abscissa").get<double>();
      log.violation = t.at("violation").get<double>();
      log.inner_iterations = t.at("inner_iterations").get<int>();
      r.trace.push_back(log);
    }
  }

  if (root.contains("campaign")) {
    r.has_campaign = true;
    const auto& camp = root.at("campaign");
    r.trials = camp.at("trials").get<std::uint64_t>();
    r.successes = camp.at("successes").get<std::uint64_t>();
    r.stables = camp.at("stables").get<std::uint64_t>();
    r.divergences = camp.at("divergences").get<std::uint64_t>();
    r.success_rate = camp.at("success_rate").get<double>();
    for (const auto& jh : camp.at("histograms")) {
      attack::CampaignStats::Histogram h;
      h.channel = jh.at("channel").get<std::string>();
      h.lo = jh.at("lo").get<double>();
      h.hi = jh.at("hi").get<double>();
      const auto& counts = jh.at("counts");
      for (int b = 0; b < attack::kHistogramBins; ++b)
        h.counts[b] = counts.at(b).get<std::uint64_t>();
      r.histograms.push_back(std::move(h));
    }
    for (const auto& s : camp.at("successful")) {
      Report::SuccessRow row;
      row.trial = s.at("trial").get<std::uint64_t>();
      row.dp_mw = s.at("dp_mw").get<std::vector<double>>();
      row.dq_mvar = s.at("dq_mvar").get<std::vector<double>>();
      row.abscissa = s.at("abscissa").get<double>();
      r.success_vectors.push_back(std::move(row));
    }
  }
  return r;
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << "# gridfdi\n";
  os << "version,kind,case_study\n";
  os << r.tool_version << "," << r.kind << "," << r.case_study << "\n";

  os << "# config\n";
  os << "key,value\n";
  for (const auto& [k, v] : r.config) os << k << "," << v << "\n";
  os << "seed," << r.seed << "\n";

  os << "# operating_point\n";
  os << "bus,v_mag,v_ang_deg,bound_pass\n";
  for (std::size_t i = 0; i < r.bus_ids.size(); ++i)
    os << r.bus_ids[i] << "," << fmt17(r.v_mag[i]) << "," << fmt17(r.v_ang_deg[i]) << ","
       << (r.bound_pass[i] ? 1 : 0) << "\n";
  os << "converged," << (r.pf_converged ? 1 : 0) << "\n";
  os << "slack_p_mw," << fmt17(r.slack_p_mw) << "\n";
  os << "slack_q_mvar," << fmt17(r.slack_q_mvar) << "\n";

  os << "# eigenvalues\n";
  os << "mode,re,im,verdict\n";
  for (std::size_t i = 0; i < r.modes.size(); ++i)
    os << (i + 1) << "," << fmt17(r.modes[i].re) << "," << fmt17(r.modes[i].im) << ","
       << (r.modes[i].unstable ? "unstable" : "stable") << "\n";

  if (r.has_attack) {
    os << "# attack\n";
    os << "load,dp_mw,dq_mvar\n";
    for (std::size_t i = 0; i < r.load_labels.size(); ++i)
      os << r.load_labels[i] << "," << fmt17(r.attack_dp_mw[i]) << ","
         << fmt17(r.attack_dq_mvar[i]) << "\n";
    os << "# deviation_p\n";
    os << "generator,dp_g_mw\n";
    for (std::size_t i = 0; i < r.nonslack_gen_labels.size(); ++i)
      os << r.nonslack_gen_labels[i] << "," << fmt17(r.deviation_dp_g_mw[i]) << "\n";
    os << "# deviation_v\n";
    os << "generator,dv_g_pu\n";
    for (std::size_t i = 0; i < r.gen_labels.size(); ++i)
      os << r.gen_labels[i] << "," << fmt17(r.deviation_dv_g_pu[i]) << "\n";
    os << "# synthesis\n";
    os << "key,value\n";
    os << "objective," << fmt17(r.objective) << "\n";
    os << "feasible," << (r.feasible ? 1 : 0) << "\n";
  }

  if (r.has_campaign) {
    os << "# campaign\n";
    os << "key,value\n";
    os << "trials," << r.trials << "\n";
    os << "successes," << r.successes << "\n";
    os << "stables," << r.stables << "\n";
    os << "divergences," << r.divergences << "\n";
    os << "success_rate," << fmt17(r.success_rate) << "\n";
    os << "# histogram\n";
    os << "channel,bin_lo,bin_hi,count\n";
    for (const auto& h : r.histograms) {
      const double w = (h.hi - h.lo) / attack::kHistogramBins;
      for (int b = 0; b < attack::kHistogramBins; ++b)
        os << h.channel << "," << fmt17(h.lo + b * w) << "," << fmt17(h.lo + (b + 1) * w)
           << "," << h.counts[b] << "\n";
    }
    os << "# successes\n";
    os << "trial,abscissa";
    for (std::size_t i = 0; i < r.load_labels.size(); ++i)
      os << ",dp_" << r.load_labels[i];
    for (std::size_t i = 0; i < r.load_labels.size(); ++i)
      os << ",dq_" << r.load_labels[i];
    os << "\n";
    for (const auto& s : r.success_vectors) {
      os << s.trial << "," << fmt17(s.abscissa);
      for (double x : s.dp_mw) os << "," << fmt17(x);
      for (double x : s.dq_mvar) os << "," << fmt17(x);
      os << "\n";
    }
  }
  return os.str();
}

void emit_report(const Report& report, const std::string& format, std::ostream& sink) {
  if (format == "json")
    sink << report_to_json(report);
  else if (format == "csv")
    sink << report_to_csv(report);
  else
    throw ValidationError("unknown report format '" + format + "'");
  if (!sink) throw std::runtime_error("report sink write failed");
}

}  // namespace gridfdi::harness
