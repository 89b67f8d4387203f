#include "gridfdi/smallsignal.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridfdi/errors.hpp"

namespace gridfdi::sss {

GeneratorLinearization linearize_generator(const net::GeneratorSpec& gen,
                                           const pf::GeneratorOperatingState& state) {
  const double sd = std::sin(state.delta0);
  const double cd = std::cos(state.delta0);
  Eigen::Matrix2d t;  // network (r,i) -> machine (d,q)
  t << sd, -cd, cd, sd;

  Eigen::Matrix2d z;
  z << -gen.r_a_pu, gen.x_q_pu, -gen.x_q_pu, -gen.r_a_pu;
  const double det = gen.r_a_pu * gen.r_a_pu + gen.x_q_pu * gen.x_q_pu;
  if (det <= 0.0) throw NumericError("singular machine impedance (r_a = x_q = 0)");
  Eigen::Matrix2d zi;
  zi << -gen.r_a_pu / det, -gen.x_q_pu / det, gen.x_q_pu / det, -gen.r_a_pu / det;

  const double two_h = 2.0 * gen.h_s;

  // d i_dq / d delta at fixed machine-frame voltage comes from the frame
  // rotation of the terminal phasor: dv_dq/d delta = (v_q0, -v_d0)
  const Eigen::Vector2d frame_rot(state.vq0, -state.vd0);
  const double diq_ddelta = (zi * frame_rot)(1);

  GeneratorLinearization lin;
  lin.a_g << 0.0, gen.omega_s_rad_s,
      -state.e_prime * diq_ddelta / two_h, -gen.d_pu / two_h;

  Eigen::Matrix2d swing_gain;
  swing_gain << 0.0, 0.0, 0.0, -state.e_prime / two_h;
  lin.b_g = swing_gain * zi * t;

  Eigen::Matrix2d dv, di;
  dv << state.vq0, 0.0, -state.vd0, 0.0;
  di << state.iq0, 0.0, -state.id0, 0.0;
  lin.c_g = t.transpose() * (zi * dv - di);

  lin.d_g = t.transpose() * zi * t;

  if (!lin.a_g.allFinite() || !lin.b_g.allFinite() || !lin.c_g.allFinite() ||
      !lin.d_g.allFinite())
    throw NumericError("non-finite generator linearization");
  return lin;
}

SystemMatrices assemble_system(const std::vector<GeneratorLinearization>& gens,
                               const net::YbusPartition& partition,
                               const Eigen::MatrixXd& y4_augmented) {
  const auto ng = static_cast<Eigen::Index>(gens.size());
  const auto ng2 = 2 * ng;
  const auto nl2 = partition.y4.rows();
  if (partition.y1.rows() != ng2)
    throw ValidationError("assemble_system: generator count does not match the partition");
  if (y4_augmented.rows() != nl2 || y4_augmented.cols() != nl2)
    throw ValidationError("assemble_system: y4' dimension mismatch");
  const auto n2 = ng2 + nl2;

  Eigen::MatrixXd a_big = Eigen::MatrixXd::Zero(ng2, ng2);
  Eigen::MatrixXd b_big = Eigen::MatrixXd::Zero(ng2, ng2);
  Eigen::MatrixXd c_big = Eigen::MatrixXd::Zero(ng2, ng2);
  Eigen::MatrixXd d_big = Eigen::MatrixXd::Zero(ng2, ng2);
  for (Eigen::Index k = 0; k < ng; ++k) {
    a_big.block<2, 2>(2 * k, 2 * k) = gens[k].a_g;
    b_big.block<2, 2>(2 * k, 2 * k) = gens[k].b_g;
    c_big.block<2, 2>(2 * k, 2 * k) = gens[k].c_g;
    d_big.block<2, 2>(2 * k, 2 * k) = gens[k].d_g;
  }

  SystemMatrices sys;
  sys.a_tilde = a_big;
  sys.b_tilde = Eigen::MatrixXd::Zero(ng2, n2);
  sys.b_tilde.leftCols(ng2) = b_big;
  sys.c_tilde = Eigen::MatrixXd::Zero(n2, ng2);
  sys.c_tilde.topRows(ng2) = -c_big;
  sys.d_tilde = Eigen::MatrixXd::Zero(n2, n2);
  sys.d_tilde.topLeftCorner(ng2, ng2) = partition.y1 - d_big;
  sys.d_tilde.topRightCorner(ng2, nl2) = partition.y2;
  sys.d_tilde.bottomLeftCorner(nl2, ng2) = partition.y3;
  sys.d_tilde.bottomRightCorner(nl2, nl2) = y4_augmented;
  return sys;
}

StateMatrix reduce_state_matrix(const SystemMatrices& sys) {
  const auto ng2 = sys.a_tilde.rows();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.d_tilde);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12))
    throw NumericError("reduce_state_matrix: d_tilde near singular (rcond estimate " +
                       std::to_string(rcond) + ")");

  StateMatrix sm;
  sm.a = sys.a_tilde - sys.b_tilde * lu.solve(sys.c_tilde);
  sm.labels.reserve(ng2);
  for (Eigen::Index k = 0; k < ng2 / 2; ++k) {
    sm.labels.push_back("delta_" + std::to_string(k + 1));
    sm.labels.push_back("omega_" + std::to_string(k + 1));
  }
  return sm;
}

EigenSolution eigendecompose(const StateMatrix& a) {
  if (!a.a.allFinite()) throw NumericError("eigendecompose: non-finite state matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a.a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecompose: QR iteration did not converge");

  const auto n = a.a.rows();
  Eigen::VectorXcd vals = solver.eigenvalues();
  Eigen::MatrixXcd vecs = solver.eigenvectors();

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const auto &vi = vals(i), &vj = vals(j);
    if (vi.real() != vj.real()) return vi.real() > vj.real();
    if (std::abs(vi.imag()) != std::abs(vj.imag()))
      return std::abs(vi.imag()) < std::abs(vj.imag());
    return vi.imag() > vj.imag();
  });

  EigenSolution out;
  out.eigenvalues.resize(n);
  out.right_vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = vals(order[k]);
    out.right_vectors.col(k) = vecs.col(order[k]).normalized();
  }
  // rows of the inverse are the matching left eigenvectors (psi^T phi = 1)
  out.left_vectors = out.right_vectors.inverse().transpose();
  out.spectral_abscissa = out.eigenvalues.real().maxCoeff();
  out.unstable = out.spectral_abscissa > kAnalysisMargin;
  return out;
}

bool is_unstable(const EigenSolution& eig, double epsilon) {
  return eig.spectral_abscissa > epsilon;
}

Eigen::VectorXcd eigenvalue_sensitivity(const StateMatrix& a, const EigenSolution& eig,
                                        const Eigen::MatrixXd& da,
                                        double conditioning_floor) {
  const auto n = a.a.rows();
  if (da.rows() != n || da.cols() != n)
    throw ValidationError("eigenvalue_sensitivity: perturbation dimension mismatch");
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::VectorXcd phi = eig.right_vectors.col(k);
    const Eigen::VectorXcd psi = eig.left_vectors.col(k);
    const std::complex<double> denom = (psi.transpose() * phi)(0);
    const double cond = std::abs(denom) / (psi.norm() * phi.norm());
    if (!(cond >= conditioning_floor))
      throw NumericError("eigenvalue_sensitivity: conditioning floor violated at mode " +
                         std::to_string(k + 1));
    out(k) = (psi.transpose() * (da * phi))(0) / denom;
  }
  return out;
}

}  // namespace gridfdi::sss
