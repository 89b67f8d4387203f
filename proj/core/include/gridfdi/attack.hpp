#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridfdi/rngstream.hpp"
#include "gridfdi/smallsignal.hpp"

namespace gridfdi::attack {

/// Per-load measurement falsification, case load order, MW/MVAr.
/// Channels outside the access mask stay exactly zero.
struct AttackVector {
  std::vector<double> dp_mw;
  std::vector<double> dq_mvar;

  static AttackVector zeros(std::size_t n_loads) {
    return {std::vector<double>(n_loads, 0.0), std::vector<double>(n_loads, 0.0)};
  }
  bool is_zero() const;
};

/// Which load channels the attacker controls. Loads are addressed by their
/// case order and labeled L1..Ln in mask specs.
struct AccessMask {
  std::vector<bool> p;
  std::vector<bool> q;

  static AccessMask full(std::size_t n_loads) {
    return {std::vector<bool>(n_loads, true), std::vector<bool>(n_loads, true)};
  }
  static AccessMask none(std::size_t n_loads) {
    return {std::vector<bool>(n_loads, false), std::vector<bool>(n_loads, false)};
  }
  std::size_t channel_count() const;
};

/// Mask spec strings: "L1:pq,L3:pq", "L2:p", "*:p", "*:pq".
AccessMask parse_mask_spec(const std::string& spec, std::size_t n_loads);
std::string mask_to_spec(const AccessMask& mask);

/// Generator setpoint changes: active power per non-slack generator and
/// voltage setpoint per generator, both in case generator order.
struct SetpointDeviation {
  std::vector<double> dp_g_mw;
  std::vector<double> dv_g_pu;

  static SetpointDeviation zeros(std::size_t n_nonslack, std::size_t n_gens) {
    return {std::vector<double>(n_nonslack, 0.0), std::vector<double>(n_gens, 0.0)};
  }
  bool is_zero() const;
};

/// Independent uniform ranges per load channel, MW/MVAr.
struct UniformDist {
  std::vector<std::array<double, 2>> p;
  std::vector<std::array<double, 2>> q;

  /// [-factor*|base|, +factor*|base|] per channel.
  static UniformDist default_for(const net::NetworkCase& c, double factor = 2.5);
};

/// Dist spec string "uniform:p=[lo,hi],q=[lo,hi]" applied to every load.
UniformDist parse_dist_spec(const std::string& spec, std::size_t n_loads);

/// Base-case quantities shared by every attack evaluation: the unattacked
/// operating point, the frozen machine EMFs, and the topology-only Y-bus
/// partition. Immutable; safe to share across threads.
struct AttackContext {
  net::NetworkCase base_case;
  net::AdmittanceMatrix ybus;
  net::YbusPartition partition;
  pf::PowerFlowOptions pf_options;
  pf::OperatingPoint base_op;
  std::vector<pf::GeneratorOperatingState> base_states;  // case generator order
  sss::StateMatrix base_matrix;
  sss::EigenSolution base_eig;
};

AttackContext make_context(const net::NetworkCase& c, const pf::PowerFlowOptions& options = {});

enum class EvalOutcome { stable, unstable, infeasible };

struct AttackEvaluation {
  EvalOutcome outcome = EvalOutcome::infeasible;
  pf::OperatingPoint op;
  std::optional<sss::StateMatrix> state_matrix;
  std::optional<sss::EigenSolution> eig;
  std::vector<pf::BoundCheck> bounds;
  bool bounds_ok = false;
};

/// Applies the attack to the loads and the deviation to the generator
/// setpoints, re-solves the power flow (slack absorbs the imbalance),
/// folds the post-attack load admittances into Y4' at the post-attack
/// voltages, and eigendecomposes the reduced state matrix. Machine EMFs
/// stay frozen at their base-case values. A diverged power flow yields
/// outcome infeasible (never a success).
AttackEvaluation evaluate_attack(const AttackContext& ctx, const AttackVector& attack,
                                 const SetpointDeviation& deviation,
                                 const Eigen::VectorXcd* warm_start = nullptr);

/// Convenience overload building a fresh context.
AttackEvaluation evaluate_attack(const net::NetworkCase& c, const AttackVector& attack,
                                 const SetpointDeviation& deviation);

/// Each accessible channel drawn independently and uniformly from its
/// range; masked channels exactly zero.
AttackVector random_attack(RngStream& rng, const UniformDist& dist, const AccessMask& mask);

inline constexpr int kHistogramBins = 30;

struct CampaignStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t stables = 0;
  std::uint64_t divergences = 0;
  double success_rate = 0.0;

  struct Success {
    std::uint64_t trial = 0;
    AttackVector attack;
    double abscissa = 0.0;
  };
  std::vector<Success> successful;  // ascending trial index

  /// Draw histograms per channel (p channels first, then q), the data
  /// behind the attack-distribution plots. Bin edges span each channel's
  /// configured range.
  struct Histogram {
    std::string channel;
    double lo = 0.0, hi = 0.0;
    std::array<std::uint64_t, kHistogramBins> counts{};
  };
  std::vector<Histogram> histograms;
};

/// Runs `trials` independent random attacks (zero setpoint deviation).
/// Trial k draws from RngStream(seed, k), so the aggregate is bit-identical
/// for any parallelism degree. A trial is a success iff the evaluation is
/// unstable; diverged power flows are tallied separately.
CampaignStats monte_carlo_campaign(const AttackContext& ctx, std::uint64_t trials,
                                   const UniformDist& dist, const AccessMask& mask,
                                   std::uint64_t seed, int parallelism);

struct SynthesisOptions {
  double epsilon_unstable = 0.1;  // required spectral abscissa, 1/s
  double weight_p = 1.0;          // objective weight on generator P deviations (pu^2)
  double weight_v = 1.0;          // objective weight on voltage-setpoint deviations
  double load_box_factor = 2.5;   // attack box: factor * |base channel|
  double load_box_floor_mw = 50;  // box half-width floor for near-zero channels
  double dp_g_box_pu = 3.0;       // setpoint deviation boxes
  double dv_g_box_pu = 0.25;
  double penalty_initial = 2e4;  // instability-violation penalty schedule
  double penalty_growth = 5.0;
  int max_outer = 8;
  double inner_tol = 1e-7;  // inner projected-BFGS gradient tolerance
  int max_inner = 120;
  int multi_start = 12;
  std::uint64_t seed = 1;
  double smoothing_beta = 50.0;  // log-sum-exp sharpness for the soft abscissa
  int ray_steps = 25;            // continuation steps along each start ray
};

struct SynthesisResult {
  AttackVector attack;
  SetpointDeviation deviation;
  double objective = 0.0;
  bool feasible = false;
  double best_abscissa = 0.0;  // best spectral abscissa reached anywhere
  pf::OperatingPoint op;       // evaluation of the returned point
  std::optional<sss::EigenSolution> eig;

  struct OuterLog {
    int outer = 0;
    double mu = 0.0;
    double objective = 0.0;
    double abscissa = 0.0;
    double violation = 0.0;  // max(0, epsilon - abscissa)
    int inner_iterations = 0;
  };
  std::vector<OuterLog> trace;  // winning start's outer-iteration log
  int winning_start = -1;
};

/// Sensitivity-guided constrained synthesis: multi-start over randomized
/// attack/deviation rays (power-flow continuation along each ray), then
/// penalty continuation with a projected quasi-Newton inner loop over the
/// accessible channels. Gradients of the smoothed spectral abscissa come
/// from eigenvalue_sensitivity chained through re-solved power flows, with
/// a finite-difference fallback when eigenvalues cluster. The best feasible
/// point is re-verified through a fresh evaluate_attack before being
/// returned; feasible = false when no start reaches the required abscissa.
SynthesisResult synthesize_attack(const AttackContext& ctx, const AccessMask& mask,
                                  const SynthesisOptions& options = {});

/// The three limited-access scenarios: L1 and L3, L1 only, active power
/// only. Requires at least three loads.
struct MaskedScenarios {
  AccessMask c41, c42, c43;
};

MaskedScenarios masked_scenarios(const net::NetworkCase& c);

}  // namespace gridfdi::attack
