#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "attack_detail.hpp"
#include "gridfdi/attack.hpp"
#include "gridfdi/errors.hpp"

namespace gridfdi::attack {

namespace {

constexpr double kBoundPenaltyWeight = 1e4;
constexpr double kFdStep = 1e-5;  // pu

/// Decision-variable layout: accessible p channels (load order), accessible
/// q channels, generator P deviations (non-slack, case order), voltage
/// setpoint deviations (all generators, case order). Everything per-unit.
struct Variables {
  std::vector<std::size_t> p_loads, q_loads;
  std::vector<std::size_t> nonslack_gens;  // case generator indices
  std::size_t n_gens = 0;
  Eigen::VectorXd lo, hi;
  double base_mva = 100.0;

  std::size_t n_channels() const { return p_loads.size() + q_loads.size(); }
  std::size_t dim() const { return n_channels() + nonslack_gens.size() + n_gens; }

  AttackVector attack_from(const Eigen::VectorXd& z, std::size_t n_loads) const {
    AttackVector a = AttackVector::zeros(n_loads);
    std::size_t i = 0;
    for (auto k : p_loads) a.dp_mw[k] = z(i++) * base_mva;
    for (auto k : q_loads) a.dq_mvar[k] = z(i++) * base_mva;
    return a;
  }

  SetpointDeviation deviation_from(const Eigen::VectorXd& z) const {
    SetpointDeviation d = SetpointDeviation::zeros(nonslack_gens.size(), n_gens);
    std::size_t i = n_channels();
    for (std::size_t k = 0; k < nonslack_gens.size(); ++k)
      d.dp_g_mw[k] = z(i++) * base_mva;
    for (std::size_t k = 0; k < n_gens; ++k) d.dv_g_pu[k] = z(i++);
    return d;
  }
};

Variables make_variables(const AttackContext& ctx, const AccessMask& mask,
                         const SynthesisOptions& opt) {
  const auto& c = ctx.base_case;
  Variables v;
  v.base_mva = c.base_mva;
  v.n_gens = c.generators.size();
  for (std::size_t k = 0; k < c.loads.size(); ++k)
    if (mask.p[k]) v.p_loads.push_back(k);
  for (std::size_t k = 0; k < c.loads.size(); ++k)
    if (mask.q[k]) v.q_loads.push_back(k);
  const int slack = c.slack_bus();
  for (std::size_t k = 0; k < c.generators.size(); ++k)
    if (c.generators[k].bus != slack) v.nonslack_gens.push_back(k);

  const auto d = static_cast<Eigen::Index>(v.dim());
  v.lo.resize(d);
  v.hi.resize(d);
  Eigen::Index i = 0;
  auto channel_halfwidth = [&](double base) {
    return std::max(opt.load_box_factor * std::abs(base), opt.load_box_floor_mw) /
           c.base_mva;
  };
  for (auto k : v.p_loads) {
    const double w = channel_halfwidth(c.loads[k].p_mw);
    v.lo(i) = -w;
    v.hi(i) = w;
    ++i;
  }
  for (auto k : v.q_loads) {
    const double w = channel_halfwidth(c.loads[k].q_mvar);
    v.lo(i) = -w;
    v.hi(i) = w;
    ++i;
  }
  for (std::size_t k = 0; k < v.nonslack_gens.size(); ++k, ++i) {
    v.lo(i) = -opt.dp_g_box_pu;
    v.hi(i) = opt.dp_g_box_pu;
  }
  for (std::size_t k = 0; k < v.n_gens; ++k, ++i) {
    // keep voltage-setpoint moves inside the generator bus's own band
    const auto& g = c.generators[k];
    const auto& bus = c.bus(g.bus);
    const double margin = 0.02;
    v.lo(i) = std::max(-opt.dv_g_box_pu, bus.v_min + margin - g.v_set_pu);
    v.hi(i) = std::min(opt.dv_g_box_pu, bus.v_max - margin - g.v_set_pu);
    if (v.lo(i) > 0.0) v.lo(i) = 0.0;
    if (v.hi(i) < 0.0) v.hi(i) = 0.0;
  }
  return v;
}

struct EvalPoint {
  bool pf_ok = false;
  bool reduced_ok = false;
  double soft = 0.0;      // normalized log-sum-exp of eigenvalue real parts
  double abscissa = 0.0;  // true spectral abscissa
  double bound_viol = 0.0;
  bool bounds_ok = false;
  Eigen::VectorXcd v;  // post-attack voltages (warm-start carrier)
  std::optional<sss::StateMatrix> a;
  std::optional<sss::EigenSolution> eig;
  Eigen::VectorXd softmax_weights;
};

double soft_abscissa(const Eigen::VectorXcd& eigenvalues, double beta,
                     Eigen::VectorXd* weights) {
  const Eigen::VectorXd re = eigenvalues.real();
  const double m = re.maxCoeff();
  const Eigen::VectorXd e = ((re.array() - m) * beta).exp();
  const double s = e.sum();
  if (weights) *weights = e / s;
  // normalized form stays at or below the true abscissa
  return m + std::log(s / static_cast<double>(re.size())) / beta;
}

class Synthesizer {
 public:
  Synthesizer(const AttackContext& ctx, const AccessMask& mask, const SynthesisOptions& opt)
      : ctx_(ctx), mask_(mask), opt_(opt), vars_(make_variables(ctx, mask, opt)) {
    eps_target_ = 1.25 * opt.epsilon_unstable;
  }

  SynthesisResult run();

 private:
  EvalPoint evaluate(const Eigen::VectorXd& z, const Eigen::VectorXcd* warm);
  double objective(const Eigen::VectorXd& z) const;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& z) const;
  double penalty_value(const EvalPoint& p, const Eigen::VectorXd& z, double mu) const;
  Eigen::VectorXd penalty_gradient(const Eigen::VectorXd& z, const EvalPoint& center,
                                   double mu);
  Eigen::VectorXd project(Eigen::VectorXd z) const;
  std::pair<Eigen::VectorXd, int> inner_minimize(Eigen::VectorXd z, double mu,
                                                 int max_inner);
  Eigen::VectorXd make_ray(int start, RngStream& rng) const;
  void consider_incumbent(const Eigen::VectorXd& z, const EvalPoint& p, int start,
                          bool came_from_flat = false);
  void shrink_deviations(int start);

  const AttackContext& ctx_;
  const AccessMask& mask_;
  SynthesisOptions opt_;
  Variables vars_;
  double eps_target_ = 0.125;

  Eigen::VectorXcd warm_;  // current inner-loop warm start
  bool have_warm_ = false;

  struct Incumbent {
    double objective = std::numeric_limits<double>::infinity();
    Eigen::VectorXd z;
    int start = -1;
    bool valid = false;
  };
  Incumbent incumbent_;
  int current_start_ = 0;
  double best_abscissa_ = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_abscissa_z_;
  bool have_best_z_ = false;
  std::vector<std::vector<SynthesisResult::OuterLog>> traces_;
};

EvalPoint Synthesizer::evaluate(const Eigen::VectorXd& z, const Eigen::VectorXcd* warm) {
  const auto attack = vars_.attack_from(z, ctx_.base_case.loads.size());
  const auto dev = vars_.deviation_from(z);
  const auto modified = detail::apply_attack(ctx_.base_case, attack, dev);
  std::vector<double> eprime;
  for (const auto& st : ctx_.base_states) eprime.push_back(st.e_prime);

  EvalPoint p;
  auto raw =
      detail::evaluate_raw(modified, ctx_.ybus, ctx_.partition, ctx_.pf_options, warm, &eprime);
  p.pf_ok = raw.pf_ok;
  if (!raw.pf_ok) return p;
  p.v = raw.op.v;
  p.reduced_ok = raw.ok;
  if (!raw.ok) return p;
  p.a = std::move(raw.state_matrix);
  p.eig = std::move(raw.eig);
  p.soft = soft_abscissa(p.eig->eigenvalues, opt_.smoothing_beta, &p.softmax_weights);
  p.abscissa = p.eig->spectral_abscissa;

  p.bound_viol = 0.0;
  p.bounds_ok = true;
  for (const auto& b : modified.buses) {
    const double vm = std::abs(p.v(modified.bus_index(b.id)));
    const double under = std::max(0.0, b.v_min - vm);
    const double over = std::max(0.0, vm - b.v_max);
    p.bound_viol += under * under + over * over;
    if (under > 0.0 || over > 0.0) p.bounds_ok = false;
  }
  return p;
}

double Synthesizer::objective(const Eigen::VectorXd& z) const {
  double f = 0.0;
  std::size_t i = vars_.n_channels();
  for (std::size_t k = 0; k < vars_.nonslack_gens.size(); ++k, ++i)
    f += opt_.weight_p * z(i) * z(i);
  for (std::size_t k = 0; k < vars_.n_gens; ++k, ++i)
    f += opt_.weight_v * z(i) * z(i);
  return f;
}

Eigen::VectorXd Synthesizer::objective_gradient(const Eigen::VectorXd& z) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
  std::size_t i = vars_.n_channels();
  for (std::size_t k = 0; k < vars_.nonslack_gens.size(); ++k, ++i)
    g(i) = 2.0 * opt_.weight_p * z(i);
  for (std::size_t k = 0; k < vars_.n_gens; ++k, ++i)
    g(i) = 2.0 * opt_.weight_v * z(i);
  return g;
}

double Synthesizer::penalty_value(const EvalPoint& p, const Eigen::VectorXd& z,
                                  double mu) const {
  if (!p.pf_ok || !p.reduced_ok) return std::numeric_limits<double>::infinity();
  const double hinge = std::max(0.0, eps_target_ - p.soft);
  return objective(z) + mu * hinge * hinge + kBoundPenaltyWeight * p.bound_viol;
}

void Synthesizer::consider_incumbent(const Eigen::VectorXd& z, const EvalPoint& p,
                                     int start, bool came_from_flat) {
  if (!p.pf_ok || !p.reduced_ok) return;
  if (p.abscissa > best_abscissa_) {
    best_abscissa_ = p.abscissa;
    best_abscissa_z_ = z;
    have_best_z_ = true;
  }
  if (!p.bounds_ok || p.abscissa < opt_.epsilon_unstable) return;
  const double f = objective(z);
  if (f >= incumbent_.objective) return;
  if (!came_from_flat) {
    // warm-started continuation can sit on power-flow solution branches a
    // fresh solve never reaches; only flat-start-verified points count
    const EvalPoint flat = evaluate(z, nullptr);
    if (!flat.reduced_ok || !flat.bounds_ok || flat.abscissa < opt_.epsilon_unstable)
      return;
  }
  incumbent_.objective = f;
  incumbent_.z = z;
  incumbent_.start = start;
  incumbent_.valid = true;
}

Eigen::VectorXd Synthesizer::project(Eigen::VectorXd z) const {
  for (Eigen::Index i = 0; i < z.size(); ++i)
    z(i) = std::clamp(z(i), vars_.lo(i), vars_.hi(i));
  return z;
}

Eigen::VectorXd Synthesizer::penalty_gradient(const Eigen::VectorXd& z,
                                              const EvalPoint& center, double mu) {
  const auto dim = z.size();
  Eigen::VectorXd g = objective_gradient(z);
  const double hinge = std::max(0.0, eps_target_ - center.soft);

  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::VectorXd zp = z, zm = z;
    zp(j) += kFdStep;
    zm(j) -= kFdStep;
    const EvalPoint pp = evaluate(zp, center.pf_ok ? &center.v : nullptr);
    const EvalPoint pm = evaluate(zm, center.pf_ok ? &center.v : nullptr);

    double dsoft = 0.0, dbv = 0.0;
    if (pp.reduced_ok && pm.reduced_ok) {
      bool used_sensitivity = false;
      if (center.reduced_ok) {
        // directional derivative of each eigenvalue along the finite-
        // difference direction of the state matrix, chained through the
        // re-solved power flows
        const Eigen::MatrixXd da = (pp.a->a - pm.a->a) / (2.0 * kFdStep);
        try {
          const Eigen::VectorXcd dl =
              sss::eigenvalue_sensitivity(*center.a, *center.eig, da);
          dsoft = (center.softmax_weights.array() * dl.real().array()).sum();
          used_sensitivity = true;
        } catch (const NumericError&) {
          // clustered eigenvalues: fall through to plain differences
        }
      }
      if (!used_sensitivity) dsoft = (pp.soft - pm.soft) / (2.0 * kFdStep);
      dbv = (pp.bound_viol - pm.bound_viol) / (2.0 * kFdStep);
    } else if (pp.reduced_ok && center.reduced_ok) {
      dsoft = (pp.soft - center.soft) / kFdStep;
      dbv = (pp.bound_viol - center.bound_viol) / kFdStep;
    } else if (pm.reduced_ok && center.reduced_ok) {
      dsoft = (center.soft - pm.soft) / kFdStep;
      dbv = (center.bound_viol - pm.bound_viol) / kFdStep;
    }
    if (hinge > 0.0) g(j) += mu * 2.0 * hinge * (-dsoft);
    g(j) += kBoundPenaltyWeight * dbv;
  }
  return g;
}

std::pair<Eigen::VectorXd, int> Synthesizer::inner_minimize(Eigen::VectorXd z, double mu,
                                                            int max_inner) {
  const auto dim = z.size();
  EvalPoint center = evaluate(z, have_warm_ ? &warm_ : nullptr);
  if (center.pf_ok) {
    warm_ = center.v;
    have_warm_ = true;
  }
  double phi = penalty_value(center, z, mu);
  if (!std::isfinite(phi)) return {z, 0};
  consider_incumbent(z, center, current_start_);

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd g = penalty_gradient(z, center, mu);

  int it = 0;
  for (; it < max_inner; ++it) {
    // projected gradient for the stopping test
    Eigen::VectorXd pg = g;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (z(i) <= vars_.lo(i) + 1e-14 && g(i) > 0.0) pg(i) = std::min(pg(i), 0.0);
      if (z(i) >= vars_.hi(i) - 1e-14 && g(i) < 0.0) pg(i) = std::max(pg(i), 0.0);
      if (z(i) <= vars_.lo(i) + 1e-14 && g(i) >= 0.0) pg(i) = 0.0;
      if (z(i) >= vars_.hi(i) - 1e-14 && g(i) <= 0.0) pg(i) = 0.0;
    }
    if (pg.lpNorm<Eigen::Infinity>() <= opt_.inner_tol) break;

    Eigen::VectorXd p = -(h_inv * g);
    if (p.dot(g) > -1e-14) {
      h_inv.setIdentity();
      p = -g;
    }

    double step = 1.0;
    Eigen::VectorXd z_new;
    EvalPoint cand;
    double phi_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 28; ++ls) {
      z_new = project(z + step * p);
      const Eigen::VectorXd s = z_new - z;
      if (s.lpNorm<Eigen::Infinity>() < 1e-14) break;
      cand = evaluate(z_new, have_warm_ ? &warm_ : nullptr);
      phi_new = penalty_value(cand, z_new, mu);
      // diverged power flow: reject the step and halve it
      if (std::isfinite(phi_new) && phi_new <= phi + 1e-4 * g.dot(s)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    consider_incumbent(z_new, cand, current_start_);
    if (cand.pf_ok) {
      warm_ = cand.v;
      have_warm_ = true;
    }
    const Eigen::VectorXd g_new = penalty_gradient(z_new, cand, mu);
    const Eigen::VectorXd s = z_new - z;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      // BFGS inverse update
      const Eigen::VectorXd hy = h_inv * y;
      const double yhy = y.dot(hy);
      h_inv += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
               (hy * s.transpose() + s * hy.transpose()) / sy;
    } else {
      h_inv.setIdentity();
    }
    const double dphi = phi - phi_new;
    z = z_new;
    center = cand;
    g = g_new;
    phi = phi_new;
    if (dphi < 1e-14 * std::max(1.0, std::abs(phi))) break;
  }
  return {z, it};
}

Eigen::VectorXd Synthesizer::make_ray(int start, RngStream& rng) const {
  const auto dim = static_cast<Eigen::Index>(vars_.dim());
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(dim);
  if (start == 0) return dir;

  const auto nch = static_cast<Eigen::Index>(vars_.n_channels());
  const auto ndpg = static_cast<Eigen::Index>(vars_.nonslack_gens.size());
  for (Eigen::Index i = 0; i < dim; ++i) dir(i) = rng.uniform(vars_.lo(i), vars_.hi(i));

  switch (start % 3) {
    case 1:
      // attack channels only — lets attack-only instabilities keep a zero
      // objective
      dir.tail(dim - nch).setZero();
      break;
    case 0:
      // stress one generator's active setpoint hard, with matching voltage
      // support so the power flow stays solvable up to the angle saddle;
      // cycle deterministically through every (generator, sign) pattern
      if (ndpg > 0) {
        const int pattern = (start / 3) % (2 * static_cast<int>(ndpg));
        const auto pick = static_cast<Eigen::Index>(pattern / 2);
        const double sign = (pattern % 2 == 0) ? 1.0 : -1.0;
        dir(nch + pick) = sign * 0.9 * vars_.hi(nch + pick);
        // the dv block is in case generator order
        const auto vj =
            nch + ndpg + static_cast<Eigen::Index>(vars_.nonslack_gens[pick]);
        dir(vj) = (sign > 0.0) ? 0.5 * vars_.hi(vj) : 0.5 * vars_.lo(vj);
      }
      break;
    default:
      break;  // plain random ray
  }
  return dir;
}

void Synthesizer::shrink_deviations(int start) {
  if (!incumbent_.valid || incumbent_.start != start) return;
  const auto nch = static_cast<Eigen::Index>(vars_.n_channels());
  const auto dim = static_cast<Eigen::Index>(vars_.dim());
  Eigen::VectorXd z = incumbent_.z;
  if ((z.tail(dim - nch).array() == 0.0).all()) return;

  auto feasible_scaled = [&](double s) {
    Eigen::VectorXd zs = z;
    zs.tail(dim - nch) *= s;
    EvalPoint p = evaluate(zs, nullptr);  // flat start: the verification path
    consider_incumbent(zs, p, start, /*came_from_flat=*/true);
    return p.reduced_ok && p.bounds_ok && p.abscissa >= opt_.epsilon_unstable;
  };

  if (feasible_scaled(0.0)) return;  // deviations not needed at all
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_scaled(mid))
      hi = mid;
    else
      lo = mid;
  }
}

SynthesisResult Synthesizer::run() {
  traces_.assign(opt_.multi_start, {});

  for (int s = 0; s < opt_.multi_start; ++s) {
    current_start_ = s;
    RngStream rng(opt_.seed, static_cast<std::uint64_t>(s));
    const Eigen::VectorXd dir = make_ray(s, rng);

    // continuation along the ray: warm-started power flows, first point at
    // or past the required abscissa becomes the polish seed
    have_warm_ = false;
    Eigen::VectorXd seed = Eigen::VectorXd::Zero(dir.size());
    bool found_seed = false;
    double ray_best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd ray_best_z = seed;
    const int steps = (dir.lpNorm<Eigen::Infinity>() == 0.0) ? 1 : opt_.ray_steps;
    auto probe = [&](double t) -> EvalPoint {
      const Eigen::VectorXd z = project(dir * t);
      EvalPoint p = evaluate(z, have_warm_ ? &warm_ : nullptr);
      if (p.pf_ok) {
        warm_ = p.v;
        have_warm_ = true;
      }
      if (p.reduced_ok) {
        consider_incumbent(z, p, s);
        if (p.abscissa > ray_best) {
          ray_best = p.abscissa;
          ray_best_z = z;
        }
        if (p.bounds_ok && p.abscissa >= eps_target_) {
          seed = z;
          found_seed = true;
        }
      }
      return p;
    };
    double t_good = 0.0;
    double t_fail = -1.0;
    for (int k = 1; k <= steps && !found_seed; ++k) {
      const double t = static_cast<double>(k) / steps;
      const EvalPoint p = probe(t);
      if (!p.pf_ok || !p.reduced_ok) {
        t_fail = t;
        break;
      }
      t_good = t;
    }
    // the unstable band often sits just inside the solvability nose; when
    // the ray dies, squeeze into the last good interval
    if (!found_seed && t_fail > 0.0 && t_good > 0.0) {
      double lo = t_good, hi = t_fail;
      for (int b = 0; b < 6 && !found_seed; ++b) {
        const double mid = 0.5 * (lo + hi);
        const EvalPoint p = probe(mid);
        if (p.pf_ok && p.reduced_ok)
          lo = mid;
        else
          hi = mid;
      }
    }
    if (!found_seed && ray_best > -std::numeric_limits<double>::infinity())
      seed = ray_best_z;

    // safeguarded penalty continuation from the seed; near-miss seeds that
    // already lifted the abscissa get the full climb, hopeless ones a
    // short one
    have_warm_ = false;
    Eigen::VectorXd x = seed;
    double mu = opt_.penalty_initial;
    const bool promising = found_seed || ray_best >= 0.02 * opt_.epsilon_unstable;
    const int outers = promising ? opt_.max_outer : std::min(2, opt_.max_outer);
    double viol_prev = std::numeric_limits<double>::infinity();
    double f_prev = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < outers; ++outer) {
      auto [x_new, iters] = inner_minimize(x, mu, opt_.max_inner);
      EvalPoint p = evaluate(x_new, have_warm_ ? &warm_ : nullptr);
      consider_incumbent(x_new, p, s);
      const double viol =
          p.reduced_ok ? std::max(0.0, opt_.epsilon_unstable - p.abscissa)
                       : std::numeric_limits<double>::infinity();
      const bool accept = viol <= viol_prev + 1e-12;
      if (accept) {
        x = x_new;
        viol_prev = std::min(viol, viol_prev);
      }
      const double f_here = objective(x);
      traces_[s].push_back({outer, mu, f_here,
                            p.reduced_ok ? p.abscissa : std::nan(""), viol, iters});
      if (accept && viol == 0.0 && f_prev - f_here < 1e-12) break;
      if (accept && viol == 0.0) f_prev = f_here;
      mu *= opt_.penalty_growth;
    }

    shrink_deviations(s);
  }

  // assemble the result from the best feasible incumbent, re-verified
  // through the public evaluation path
  SynthesisResult res;
  res.best_abscissa = best_abscissa_;
  const std::size_t n_loads = ctx_.base_case.loads.size();
  const std::size_t n_gens = ctx_.base_case.generators.size();

  if (incumbent_.valid) {
    const auto attack = vars_.attack_from(incumbent_.z, n_loads);
    const auto dev = vars_.deviation_from(incumbent_.z);
    const auto ev = evaluate_attack(ctx_, attack, dev, nullptr);
    if (ev.outcome == EvalOutcome::unstable && ev.bounds_ok) {
      res.attack = attack;
      res.deviation = dev;
      res.objective = incumbent_.objective;
      res.feasible = ev.eig->spectral_abscissa >= opt_.epsilon_unstable;
      res.op = ev.op;
      res.eig = ev.eig;
      res.trace = traces_[incumbent_.start];
      res.winning_start = incumbent_.start;
      if (res.feasible) return res;
    }
  }

  // no verified feasible point: report the best abscissa reached
  res.feasible = false;
  if (have_best_z_) {
    res.attack = vars_.attack_from(best_abscissa_z_, n_loads);
    res.deviation = vars_.deviation_from(best_abscissa_z_);
    res.objective = objective(best_abscissa_z_);
    const auto ev = evaluate_attack(ctx_, res.attack, res.deviation, nullptr);
    res.op = ev.op;
    res.eig = ev.eig;
  } else {
    res.attack = AttackVector::zeros(n_loads);
    res.deviation = SetpointDeviation::zeros(vars_.nonslack_gens.size(), n_gens);
  }
  return res;
}

}  // namespace

SynthesisResult synthesize_attack(const AttackContext& ctx, const AccessMask& mask,
                                  const SynthesisOptions& options) {
  if (mask.p.size() != ctx.base_case.loads.size() ||
      mask.q.size() != ctx.base_case.loads.size())
    throw ValidationError("synthesis: mask size does not match the case loads");
  if (mask.channel_count() == 0)
    throw ValidationError("synthesis: at least one accessible channel required");
  if (!(options.epsilon_unstable > 0.0))
    throw ValidationError("synthesis: epsilon_unstable must be positive");
  if (!(options.penalty_growth > 1.0))
    throw ValidationError("synthesis: penalty growth factor must exceed 1");
  Synthesizer synth(ctx, mask, options);
  return synth.run();
}

}  // namespace gridfdi::attack
