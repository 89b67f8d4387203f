#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gridfdi/types.hpp"

namespace gridfdi::pf {

struct PowerFlowOptions {
  // tight enough that the structural zero eigenvalue stays well inside the
  // 1e-6 stability margin at stressed operating points
  double tol = 1e-10;  // max injection-mismatch norm, pu
  int max_iter = 50;
  bool flat_start = true;  // when false, solve from the supplied warm start
};

/// Converged (or diagnosed) power-flow solution. Immutable once returned.
struct OperatingPoint {
  Eigen::VectorXcd v;      // complex bus voltage, pu
  Eigen::VectorXcd i_inj;  // net current injection Y*v, pu
  Eigen::VectorXcd s_inj;  // net power injection v .* conj(i_inj), pu
  double slack_p = 0.0;    // slack generator output, pu
  double slack_q = 0.0;
  bool converged = false;
  int iterations = 0;
  double mismatch = 0.0;  // final residual inf-norm
  std::vector<double> mismatch_history;
  int worst_bus = 0;  // bus id with the largest final mismatch
};

/// Newton-Raphson in rectangular voltage coordinates. PQ buses match
/// (P, Q), PV buses match (P, |V|), the slack is pinned at v_set angle 0.
/// Non-convergence is reported through the returned diagnostics, not
/// thrown; a singular Jacobian throws NumericError.
OperatingPoint solve_power_flow(const net::NetworkCase& c,
                                const PowerFlowOptions& options = {},
                                const Eigen::VectorXcd* warm_start = nullptr);

struct BoundCheck {
  int bus = 0;
  double v_mag = 0.0;
  bool pass = false;  // v_min <= |v| <= v_max, closed interval
};

std::vector<BoundCheck> check_voltage_bounds(const OperatingPoint& op,
                                             const net::NetworkCase& c);
bool all_bounds_pass(const std::vector<BoundCheck>& checks);

/// Classical-machine internal state at an operating point. dq quantities
/// follow the machine-frame rotation by delta0:
///   v_d0 = |V| sin(delta0 - theta_V), v_q0 = |V| cos(delta0 - theta_V).
struct GeneratorOperatingState {
  double delta0 = 0.0;   // rotor angle, rad
  double e_prime = 0.0;  // internal EMF magnitude, pu
  double vd0 = 0.0, vq0 = 0.0;
  double id0 = 0.0, iq0 = 0.0;
};

/// E' angle delta0 from E'/_delta0 = V + (r_a + j x_q) I, with
/// I = conj(S_gen / V). Throws NumericError on zero terminal voltage.
GeneratorOperatingState init_generator_states(const OperatingPoint& op,
                                              const net::NetworkCase& c,
                                              const net::GeneratorSpec& gen);

}  // namespace gridfdi::pf
