#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gridfdi/netmodel.hpp"
#include "gridfdi/powerflow.hpp"

namespace gridfdi::sss {

/// Default margin for the stability verdict: the structural reference-angle
/// eigenvalue sits at the origin up to roundoff and must not be flagged.
inline constexpr double kAnalysisMargin = 1e-6;

/// Per-machine linearization blocks. With T(d) = [[sin d, -cos d],
/// [cos d, sin d]] (network -> machine frame) and Z = [[-R_a, X_q],
/// [-X_q, -R_a]]:
///   a_g = [[0, w_s], [-E'/(2H) * [Z^-1 (v_q0, -v_d0)]_2, -D/(2H)]]
///   b_g = [[0, 0], [0, -E'/(2H)]] Z^-1 T
///   c_g = T' (Z^-1 [[v_q0, 0], [-v_d0, 0]] - [[i_q0, 0], [-i_d0, 0]])
///   d_g = T' Z^-1 T
/// These are the exact Jacobians of the classical-machine injection model;
/// the a_g(2,1) entry is the machine's own synchronizing term.
struct GeneratorLinearization {
  Eigen::Matrix2d a_g, b_g, c_g, d_g;
};

GeneratorLinearization linearize_generator(const net::GeneratorSpec& gen,
                                           const pf::GeneratorOperatingState& state);

/// The four constituting matrices: a_tilde = A_G, b_tilde = [B_G 0],
/// c_tilde = [-C_G; 0], d_tilde = [[Y1 - D_G, Y2], [Y3, Y4']].
struct SystemMatrices {
  Eigen::MatrixXd a_tilde;  // 2ng x 2ng
  Eigen::MatrixXd b_tilde;  // 2ng x 2n
  Eigen::MatrixXd c_tilde;  // 2n x 2ng
  Eigen::MatrixXd d_tilde;  // 2n x 2n
};

/// Generator order must match the partition's generator-bus order.
SystemMatrices assemble_system(const std::vector<GeneratorLinearization>& gens,
                               const net::YbusPartition& partition,
                               const Eigen::MatrixXd& y4_augmented);

struct StateMatrix {
  Eigen::MatrixXd a;                // 2ng x 2ng, real
  std::vector<std::string> labels;  // delta_1, omega_1, ...
};

/// A = a_tilde - b_tilde * d_tilde^-1 * c_tilde, via LU solves. Refuses a
/// d_tilde whose condition estimate exceeds 1e12 (NumericError).
StateMatrix reduce_state_matrix(const SystemMatrices& sys);

struct EigenSolution {
  Eigen::VectorXcd eigenvalues;    // rad/s; sorted Re desc, then |Im| asc, +Im first
  Eigen::MatrixXcd right_vectors;  // unit 2-norm columns phi_k
  Eigen::MatrixXcd left_vectors;   // psi_k^T A = lambda_k psi_k^T, psi_k^T phi_k = 1
  double spectral_abscissa = 0.0;  // max real part
  bool unstable = false;           // abscissa > kAnalysisMargin
};

/// Full nonsymmetric eigendecomposition (real Schur based). Left vectors
/// come from the inverse of the right-vector matrix so the pairing used by
/// sensitivities is consistent. Throws NumericError on non-convergence.
EigenSolution eigendecompose(const StateMatrix& a);

/// True iff max_k Re(lambda_k) > epsilon.
bool is_unstable(const EigenSolution& eig, double epsilon);

/// First-order directional derivative of every eigenvalue along da:
/// d lambda_k = psi_k^T da phi_k / (psi_k^T phi_k). Throws NumericError when
/// any |psi^T phi| / (|psi||phi|) falls below the conditioning floor
/// (defective or clustered eigenvalue); callers fall back to finite
/// differences.
Eigen::VectorXcd eigenvalue_sensitivity(const StateMatrix& a,
                                        const EigenSolution& eig,
                                        const Eigen::MatrixXd& da,
                                        double conditioning_floor = 1e-8);

}  // namespace gridfdi::sss
