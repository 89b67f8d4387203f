#include "gridfdi/attack.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "attack_detail.hpp"
#include "gridfdi/errors.hpp"

namespace gridfdi::attack {

bool AttackVector::is_zero() const {
  auto all0 = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  return all0(dp_mw) && all0(dq_mvar);
}

std::size_t AccessMask::channel_count() const {
  std::size_t n = 0;
  for (bool b : p) n += b;
  for (bool b : q) n += b;
  return n;
}

bool SetpointDeviation::is_zero() const {
  auto all0 = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  return all0(dp_g_mw) && all0(dv_g_pu);
}

UniformDist UniformDist::default_for(const net::NetworkCase& c, double factor) {
  UniformDist d;
  for (const auto& l : c.loads) {
    d.p.push_back({-factor * std::abs(l.p_mw), factor * std::abs(l.p_mw)});
    d.q.push_back({-factor * std::abs(l.q_mvar), factor * std::abs(l.q_mvar)});
  }
  return d;
}

namespace {

std::array<double, 2> parse_range(const std::string& token, const std::string& spec) {
  // token looks like "[lo,hi]"
  if (token.size() < 5 || token.front() != '[' || token.back() != ']')
    throw ParseError("distribution spec '" + spec + "': bad range '" + token + "'");
  const auto comma = token.find(',');
  if (comma == std::string::npos)
    throw ParseError("distribution spec '" + spec + "': bad range '" + token + "'");
  try {
    const double lo = std::stod(token.substr(1, comma - 1));
    const double hi = std::stod(token.substr(comma + 1, token.size() - comma - 2));
    if (!(lo <= hi))
      throw ParseError("distribution spec '" + spec + "': lo > hi in '" + token + "'");
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw ParseError("distribution spec '" + spec + "': bad number in '" + token + "'");
  }
}

}  // namespace

UniformDist parse_dist_spec(const std::string& spec, std::size_t n_loads) {
  const std::string prefix = "uniform:";
  if (spec.rfind(prefix, 0) != 0)
    throw ParseError("distribution spec '" + spec + "': expected 'uniform:...'");
  std::string body = spec.substr(prefix.size());

  // split on the comma between "]" and a key, not the one inside ranges
  std::array<double, 2> pr{0, 0}, qr{0, 0};
  bool have_p = false, have_q = false;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto eq = body.find('=', pos);
    if (eq == std::string::npos || eq == pos)
      throw ParseError("distribution spec '" + spec + "': expected key=range");
    const std::string key = body.substr(pos, eq - pos);
    const auto close = body.find(']', eq);
    if (close == std::string::npos)
      throw ParseError("distribution spec '" + spec + "': unterminated range");
    const std::string range = body.substr(eq + 1, close - eq);
    if (key == "p") {
      pr = parse_range(range, spec);
      have_p = true;
    } else if (key == "q") {
      qr = parse_range(range, spec);
      have_q = true;
    } else {
      throw ParseError("distribution spec '" + spec + "': unknown channel '" + key + "'");
    }
    pos = close + 1;
    if (pos < body.size()) {
      if (body[pos] != ',')
        throw ParseError("distribution spec '" + spec + "': expected ','");
      ++pos;
    }
  }
  if (!have_p || !have_q)
    throw ParseError("distribution spec '" + spec + "': both p and q ranges required");

  UniformDist d;
  d.p.assign(n_loads, pr);
  d.q.assign(n_loads, qr);
  return d;
}

AccessMask parse_mask_spec(const std::string& spec, std::size_t n_loads) {
  AccessMask mask = AccessMask::none(n_loads);
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto colon = token.find(':');
    if (colon == std::string::npos)
      throw ParseError("mask spec '" + spec + "': expected 'Lk:channels' in '" + token + "'");
    const std::string who = token.substr(0, colon);
    const std::string channels = token.substr(colon + 1);
    if (channels != "p" && channels != "q" && channels != "pq")
      throw ParseError("mask spec '" + spec + "': channels must be p, q or pq");
    std::vector<std::size_t> targets;
    if (who == "*") {
      for (std::size_t k = 0; k < n_loads; ++k) targets.push_back(k);
    } else if (who.size() >= 2 && who[0] == 'L') {
      std::size_t idx = 0;
      try {
        idx = std::stoul(who.substr(1));
      } catch (const std::exception&) {
        throw ParseError("mask spec '" + spec + "': bad load label '" + who + "'");
      }
      if (idx < 1 || idx > n_loads)
        throw ParseError("mask spec '" + spec + "': no load labeled '" + who + "'");
      targets.push_back(idx - 1);
    } else {
      throw ParseError("mask spec '" + spec + "': bad load label '" + who + "'");
    }
    for (auto k : targets) {
      if (channels == "p" || channels == "pq") mask.p[k] = true;
      if (channels == "q" || channels == "pq") mask.q[k] = true;
    }
  }
  return mask;
}

std::string mask_to_spec(const AccessMask& mask) {
  std::string out;
  for (std::size_t k = 0; k < mask.p.size(); ++k) {
    if (!mask.p[k] && !mask.q[k]) continue;
    if (!out.empty()) out += ',';
    out += "L" + std::to_string(k + 1) + ":";
    if (mask.p[k]) out += 'p';
    if (mask.q[k]) out += 'q';
  }
  return out;
}

namespace detail {

net::NetworkCase apply_attack(const net::NetworkCase& base, const AttackVector& attack,
                              const SetpointDeviation& deviation) {
  if (attack.dp_mw.size() != base.loads.size() ||
      attack.dq_mvar.size() != base.loads.size())
    throw ValidationError("attack vector size does not match the case loads");
  net::NetworkCase c = base;
  for (std::size_t k = 0; k < c.loads.size(); ++k) {
    c.loads[k].p_mw += attack.dp_mw[k];
    c.loads[k].q_mvar += attack.dq_mvar[k];
  }
  const int slack = base.slack_bus();
  std::size_t nonslack = 0, gi = 0;
  for (auto& g : c.generators) {
    if (gi >= deviation.dv_g_pu.size())
      throw ValidationError("deviation dv_g size does not match the case generators");
    g.v_set_pu += deviation.dv_g_pu[gi++];
    if (g.bus != slack) {
      if (nonslack >= deviation.dp_g_mw.size())
        throw ValidationError("deviation dp_g size does not match non-slack generators");
      g.p_set_mw += deviation.dp_g_mw[nonslack++];
    }
  }
  if (nonslack != deviation.dp_g_mw.size() || gi != deviation.dv_g_pu.size())
    throw ValidationError("deviation size does not match the case generators");
  return c;
}

RawEval evaluate_raw(const net::NetworkCase& c, const net::AdmittanceMatrix& ybus,
                     const net::YbusPartition& partition,
                     const pf::PowerFlowOptions& options,
                     const Eigen::VectorXcd* warm_start,
                     const std::vector<double>* fixed_eprime) {
  RawEval out;
  pf::PowerFlowOptions opts = options;
  opts.flat_start = (warm_start == nullptr);
  out.op = pf::solve_power_flow(c, opts, warm_start);
  out.pf_ok = out.op.converged;
  if (!out.pf_ok) return out;

  out.states.reserve(c.generators.size());
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    auto st = pf::init_generator_states(out.op, c, c.generators[k]);
    if (fixed_eprime) st.e_prime = (*fixed_eprime)[k];
    out.states.push_back(st);
  }

  // machine blocks in partition order (ascending generator bus ids)
  std::vector<sss::GeneratorLinearization> lins;
  lins.reserve(partition.gen_buses.size());
  for (int bus : partition.gen_buses) {
    std::size_t idx = 0;
    for (; idx < c.generators.size(); ++idx)
      if (c.generators[idx].bus == bus) break;
    lins.push_back(sss::linearize_generator(c.generators[idx], out.states[idx]));
  }

  Eigen::VectorXcd v_load(partition.load_buses.size());
  for (std::size_t k = 0; k < partition.load_buses.size(); ++k)
    v_load(static_cast<Eigen::Index>(k)) = out.op.v(c.bus_index(partition.load_buses[k]));

  try {
    const Eigen::MatrixXd y4p = net::augment_load_admittance(
        partition.y4, partition.load_buses, c.loads, c.base_mva, v_load);
    const auto sys = sss::assemble_system(lins, partition, y4p);
    out.state_matrix = sss::reduce_state_matrix(sys);
    out.eig = sss::eigendecompose(*out.state_matrix);
    out.ok = true;
  } catch (const NumericError&) {
    // near-singular d_tilde or eigensolver failure at an extreme operating
    // point: counted as an infeasible operating point, never a success
    out.state_matrix.reset();
    out.eig.reset();
    out.ok = false;
  }
  return out;
}

}  // namespace detail

AttackContext make_context(const net::NetworkCase& c, const pf::PowerFlowOptions& options) {
  net::validate(c);
  AttackContext ctx;
  ctx.base_case = c;
  ctx.ybus = net::build_ybus(c);
  ctx.partition = net::partition_ybus(ctx.ybus, c);
  ctx.pf_options = options;
  auto raw = detail::evaluate_raw(c, ctx.ybus, ctx.partition, options, nullptr, nullptr);
  if (!raw.pf_ok)
    throw ConvergenceError("base-case power flow did not converge (worst mismatch at bus " +
                           std::to_string(raw.op.worst_bus) + ")");
  if (!raw.ok) throw NumericError("base-case small-signal reduction failed");
  ctx.base_op = std::move(raw.op);
  ctx.base_states = std::move(raw.states);
  ctx.base_matrix = std::move(*raw.state_matrix);
  ctx.base_eig = std::move(*raw.eig);
  return ctx;
}

AttackEvaluation evaluate_attack(const AttackContext& ctx, const AttackVector& attack,
                                 const SetpointDeviation& deviation,
                                 const Eigen::VectorXcd* warm_start) {
  const auto modified = detail::apply_attack(ctx.base_case, attack, deviation);
  std::vector<double> eprime;
  eprime.reserve(ctx.base_states.size());
  for (const auto& st : ctx.base_states) eprime.push_back(st.e_prime);

  auto raw = detail::evaluate_raw(modified, ctx.ybus, ctx.partition, ctx.pf_options,
                                  warm_start, &eprime);
  AttackEvaluation ev;
  ev.op = std::move(raw.op);
  if (!raw.ok) {
    ev.outcome = EvalOutcome::infeasible;
    return ev;
  }
  ev.state_matrix = std::move(raw.state_matrix);
  ev.eig = std::move(raw.eig);
  ev.outcome = sss::is_unstable(*ev.eig, sss::kAnalysisMargin) ? EvalOutcome::unstable
                                                               : EvalOutcome::stable;
  ev.bounds = pf::check_voltage_bounds(ev.op, modified);
  ev.bounds_ok = pf::all_bounds_pass(ev.bounds);
  return ev;
}

AttackEvaluation evaluate_attack(const net::NetworkCase& c, const AttackVector& attack,
                                 const SetpointDeviation& deviation) {
  return evaluate_attack(make_context(c), attack, deviation, nullptr);
}

AttackVector random_attack(RngStream& rng, const UniformDist& dist, const AccessMask& mask) {
  const std::size_t n = mask.p.size();
  if (dist.p.size() != n || dist.q.size() != n)
    throw ValidationError("distribution ranges do not match the mask size");
  AttackVector a = AttackVector::zeros(n);
  for (std::size_t k = 0; k < n; ++k)
    if (mask.p[k]) a.dp_mw[k] = rng.uniform(dist.p[k][0], dist.p[k][1]);
  for (std::size_t k = 0; k < n; ++k)
    if (mask.q[k]) a.dq_mvar[k] = rng.uniform(dist.q[k][0], dist.q[k][1]);
  return a;
}

CampaignStats monte_carlo_campaign(const AttackContext& ctx, std::uint64_t trials,
                                   const UniformDist& dist, const AccessMask& mask,
                                   std::uint64_t seed, int parallelism) {
  if (trials < 1) throw ValidationError("campaign: trials must be >= 1");
  const std::size_t n_loads = ctx.base_case.loads.size();
  if (mask.p.size() != n_loads || mask.q.size() != n_loads)
    throw ValidationError("campaign: mask size does not match the case loads");

  const int jobs = std::clamp(parallelism, 1, 256);
  const auto deviation = SetpointDeviation::zeros(
      ctx.base_case.generators.size() - 1, ctx.base_case.generators.size());

  struct Local {
    std::uint64_t successes = 0, stables = 0, divergences = 0;
    std::vector<CampaignStats::Success> successful;
    std::vector<std::array<std::uint64_t, kHistogramBins>> hist;
  };

  // histogram channels: accessible p channels first, then q
  std::vector<std::pair<std::string, std::array<double, 2>>> channels;
  for (std::size_t k = 0; k < n_loads; ++k)
    if (mask.p[k]) channels.push_back({"L" + std::to_string(k + 1) + ":p", dist.p[k]});
  for (std::size_t k = 0; k < n_loads; ++k)
    if (mask.q[k]) channels.push_back({"L" + std::to_string(k + 1) + ":q", dist.q[k]});

  auto bin_of = [](double x, double lo, double hi) {
    if (hi <= lo) return 0;
    int b = static_cast<int>((x - lo) / (hi - lo) * kHistogramBins);
    return std::clamp(b, 0, kHistogramBins - 1);
  };

  std::vector<Local> locals(jobs);
  for (auto& l : locals) l.hist.resize(channels.size());

  auto worker = [&](int w) {
    Local& local = locals[w];
    for (std::uint64_t t = static_cast<std::uint64_t>(w); t < trials;
         t += static_cast<std::uint64_t>(jobs)) {
      RngStream rng(seed, t);
      const AttackVector a = random_attack(rng, dist, mask);
      std::size_t ch = 0;
      for (std::size_t k = 0; k < n_loads; ++k)
        if (mask.p[k])
          local.hist[ch++][bin_of(a.dp_mw[k], dist.p[k][0], dist.p[k][1])]++;
      for (std::size_t k = 0; k < n_loads; ++k)
        if (mask.q[k])
          local.hist[ch++][bin_of(a.dq_mvar[k], dist.q[k][0], dist.q[k][1])]++;

      const auto ev = evaluate_attack(ctx, a, deviation, nullptr);
      switch (ev.outcome) {
        case EvalOutcome::infeasible:
          local.divergences++;
          break;
        case EvalOutcome::stable:
          local.stables++;
          break;
        case EvalOutcome::unstable:
          local.successes++;
          local.successful.push_back({t, a, ev.eig->spectral_abscissa});
          break;
      }
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  CampaignStats stats;
  stats.trials = trials;
  for (auto& l : locals) {
    stats.successes += l.successes;
    stats.stables += l.stables;
    stats.divergences += l.divergences;
    stats.successful.insert(stats.successful.end(), l.successful.begin(),
                            l.successful.end());
  }
  std::sort(stats.successful.begin(), stats.successful.end(),
            [](const auto& a, const auto& b) { return a.trial < b.trial; });
  stats.success_rate =
      static_cast<double>(stats.successes) / static_cast<double>(trials);
  for (std::size_t ci = 0; ci < channels.size(); ++ci) {
    CampaignStats::Histogram h;
    h.channel = channels[ci].first;
    h.lo = channels[ci].second[0];
    h.hi = channels[ci].second[1];
    for (const auto& l : locals)
      for (int b = 0; b < kHistogramBins; ++b) h.counts[b] += l.hist[ci][b];
    stats.histograms.push_back(std::move(h));
  }
  return stats;
}

MaskedScenarios masked_scenarios(const net::NetworkCase& c) {
  const std::size_t n = c.loads.size();
  if (n < 3)
    throw ValidationError("masked scenarios need loads labeled L1..L3 (case has " +
                          std::to_string(n) + ")");
  MaskedScenarios s{AccessMask::none(n), AccessMask::none(n), AccessMask::none(n)};
  s.c41.p[0] = s.c41.q[0] = true;  // L1 and L3, both channels
  s.c41.p[2] = s.c41.q[2] = true;
  s.c42.p[0] = s.c42.q[0] = true;  // L1 only
  for (std::size_t k = 0; k < n; ++k) s.c43.p[k] = true;  // active power only
  return s;
}

}  // namespace gridfdi::attack
