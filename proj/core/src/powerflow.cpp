#include "gridfdi/powerflow.hpp"

#include <cmath>

#include "gridfdi/errors.hpp"
#include "gridfdi/netmodel.hpp"

namespace gridfdi::pf {

namespace {

struct BusSchedule {
  Eigen::VectorXd p;  // scheduled net active injection, pu
  Eigen::VectorXd q;  // scheduled net reactive injection, pu (pq buses)
  Eigen::VectorXd v_set;
  std::vector<net::BusKind> kind;
};

BusSchedule build_schedule(const net::NetworkCase& c) {
  const auto n = static_cast<Eigen::Index>(c.buses.size());
  BusSchedule s;
  s.p = Eigen::VectorXd::Zero(n);
  s.q = Eigen::VectorXd::Zero(n);
  s.v_set = Eigen::VectorXd::Ones(n);
  s.kind.resize(n);
  for (const auto& b : c.buses) s.kind[c.bus_index(b.id)] = b.kind;
  for (const auto& l : c.loads) {
    const auto i = c.bus_index(l.bus);
    const auto spu = c.load_s_pu(l);
    s.p(i) -= spu.real();
    s.q(i) -= spu.imag();
  }
  for (const auto& g : c.generators) {
    const auto i = c.bus_index(g.bus);
    s.v_set(i) = g.v_set_pu;
    if (s.kind[i] != net::BusKind::slack) s.p(i) += c.gen_pset_pu(g);
  }
  return s;
}

}  // namespace

OperatingPoint solve_power_flow(const net::NetworkCase& c, const PowerFlowOptions& options,
                                const Eigen::VectorXcd* warm_start) {
  if (options.tol <= 0.0) throw ValidationError("power flow: tol must be positive");
  if (options.max_iter < 1) throw ValidationError("power flow: max_iter must be >= 1");

  const auto ybus = net::build_ybus(c);
  const auto n = ybus.y.rows();
  const auto sched = build_schedule(c);
  const int slack = c.bus_index(c.slack_bus());

  Eigen::VectorXcd v(n);
  if (!options.flat_start && warm_start && warm_start->size() == n) {
    v = *warm_start;
    v(slack) = sched.v_set(slack);  // slack stays pinned
  } else {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = sched.v_set(i);
  }

  std::vector<Eigen::Index> unknown;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != slack) unknown.push_back(i);
  const auto m = static_cast<Eigen::Index>(unknown.size());

  OperatingPoint op;
  op.mismatch_history.reserve(options.max_iter + 1);

  Eigen::VectorXcd i_inj;
  Eigen::VectorXd f(2 * m);
  auto fill_mismatch = [&]() {
    i_inj = ybus.y * v;
    for (Eigen::Index a = 0; a < m; ++a) {
      const auto i = unknown[a];
      const std::complex<double> s = v(i) * std::conj(i_inj(i));
      f(2 * a) = sched.p(i) - s.real();
      if (sched.kind[i] == net::BusKind::pv)
        f(2 * a + 1) = sched.v_set(i) * sched.v_set(i) - std::norm(v(i));
      else
        f(2 * a + 1) = sched.q(i) - s.imag();
    }
  };

  int it = 0;
  double norm = 0.0;
  for (;; ++it) {
    fill_mismatch();
    norm = (m > 0) ? f.cwiseAbs().maxCoeff() : 0.0;
    op.mismatch_history.push_back(norm);
    if (norm <= options.tol || it >= options.max_iter) break;

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (Eigen::Index a = 0; a < m; ++a) {
      const auto i = unknown[a];
      for (Eigen::Index b = 0; b < m; ++b) {
        const auto j = unknown[b];
        // dS_i/dVr_j and dS_i/dVi_j with S_i = V_i conj((Y V)_i)
        std::complex<double> ds_dr = v(i) * std::conj(ybus.y(i, j));
        std::complex<double> ds_di = std::complex<double>(0, -1) * ds_dr;
        if (i == j) {
          ds_dr += std::conj(i_inj(i));
          ds_di += std::complex<double>(0, 1) * std::conj(i_inj(i));
        }
        jac(2 * a, 2 * b) = ds_dr.real();
        jac(2 * a, 2 * b + 1) = ds_di.real();
        if (sched.kind[i] == net::BusKind::pv) {
          jac(2 * a + 1, 2 * b) = (i == j) ? 2.0 * v(i).real() : 0.0;
          jac(2 * a + 1, 2 * b + 1) = (i == j) ? 2.0 * v(i).imag() : 0.0;
        } else {
          jac(2 * a + 1, 2 * b) = ds_dr.imag();
          jac(2 * a + 1, 2 * b + 1) = ds_di.imag();
        }
      }
    }
    const Eigen::VectorXd dx = jac.partialPivLu().solve(f);
    if (!dx.allFinite()) throw NumericError("power flow: singular Jacobian");
    for (Eigen::Index a = 0; a < m; ++a)
      v(unknown[a]) += std::complex<double>(dx(2 * a), dx(2 * a + 1));
  }

  op.v = v;
  op.i_inj = ybus.y * v;
  op.s_inj = v.array() * op.i_inj.array().conjugate();
  op.converged = norm <= options.tol;
  op.iterations = it;
  op.mismatch = norm;
  op.worst_bus = 0;
  if (m > 0) {
    Eigen::Index worst = 0;
    f.cwiseAbs().maxCoeff(&worst);
    op.worst_bus = static_cast<int>(unknown[worst / 2]) + 1;
  }
  op.slack_p = op.s_inj(slack).real();
  op.slack_q = op.s_inj(slack).imag();
  return op;
}

std::vector<BoundCheck> check_voltage_bounds(const OperatingPoint& op,
                                             const net::NetworkCase& c) {
  std::vector<BoundCheck> out;
  out.reserve(c.buses.size());
  for (const auto& b : c.buses) {
    const double vm = std::abs(op.v(c.bus_index(b.id)));
    out.push_back({b.id, vm, b.v_min <= vm && vm <= b.v_max});
  }
  return out;
}

bool all_bounds_pass(const std::vector<BoundCheck>& checks) {
  for (const auto& ck : checks)
    if (!ck.pass) return false;
  return true;
}

GeneratorOperatingState init_generator_states(const OperatingPoint& op,
                                              const net::NetworkCase& c,
                                              const net::GeneratorSpec& gen) {
  const auto i = c.bus_index(gen.bus);
  const std::complex<double> vt = op.v(i);
  if (std::abs(vt) <= 0.0)
    throw NumericError("zero terminal voltage at generator bus " + std::to_string(gen.bus));

  // loads never sit on generator buses, so the bus injection is the machine output
  const std::complex<double> s_gen = op.s_inj(i);
  const std::complex<double> it = std::conj(s_gen / vt);
  const std::complex<double> e = vt + std::complex<double>(gen.r_a_pu, gen.x_q_pu) * it;

  GeneratorOperatingState st;
  st.delta0 = std::arg(e);
  st.e_prime = std::abs(e);
  const double theta_v = std::arg(vt);
  st.vd0 = std::abs(vt) * std::sin(st.delta0 - theta_v);
  st.vq0 = std::abs(vt) * std::cos(st.delta0 - theta_v);
  const double im = std::abs(it);
  const double theta_i = (im > 0.0) ? std::arg(it) : 0.0;
  st.id0 = im * std::sin(st.delta0 - theta_i);
  st.iq0 = im * std::cos(st.delta0 - theta_i);
  return st;
}

}  // namespace gridfdi::pf
