#pragma once

#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace gridfdi::net {

enum class BusKind { slack, pv, pq };

const char* to_string(BusKind kind);
BusKind bus_kind_from_string(const std::string& s);

struct Bus {
  int id = 0;  // 1-based and contiguous after normalization
  BusKind kind = BusKind::pq;
  double v_min = 0.9;  // pu
  double v_max = 1.1;  // pu
  std::string name;
};

struct Branch {
  int from = 0;
  int to = 0;
  double r = 0.0;     // series resistance, pu
  double x = 0.0;     // series reactance, pu
  double b_sh = 0.0;  // total line charging susceptance, pu
  double tap = 1.0;   // off-nominal turns ratio at the from side
};

struct GeneratorSpec {
  int bus = 0;
  double p_set_mw = 0.0;  // scheduled active power; not used on the slack machine
  double v_set_pu = 1.0;
  double h_s = 1.0;    // inertia constant, s
  double d_pu = 0.0;   // damping coefficient, pu torque per pu speed
  double r_a_pu = 0.0;
  double x_q_pu = 0.0;  // transient reactance of the classical model
  double omega_s_rad_s = 2.0 * std::numbers::pi * 60.0;
};

struct LoadSpec {
  int bus = 0;
  double p_mw = 0.0;  // negative values represent injection
  double q_mvar = 0.0;
};

/// Static grid description. Immutable after construction; all fields keep
/// the case-file units (MW/MVAr at the boundary), and the *_pu helpers are
/// the single MW-to-per-unit conversion point used by the solvers.
struct NetworkCase {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<GeneratorSpec> generators;
  std::vector<LoadSpec> loads;

  int bus_index(int id) const;  // 0-based position; ids are 1..n once validated
  const Bus& bus(int id) const;
  int slack_bus() const;
  const GeneratorSpec* generator_at(int bus_id) const;

  std::complex<double> load_s_pu(const LoadSpec& load) const {
    return {load.p_mw / base_mva, load.q_mvar / base_mva};
  }
  double gen_pset_pu(const GeneratorSpec& gen) const { return gen.p_set_mw / base_mva; }

  /// Buses carrying a generator, ascending ids.
  std::vector<int> generator_buses() const;
  /// Everything else, including zero-injection buses, ascending ids.
  std::vector<int> load_buses() const;
};

/// Enforces all structural invariants; throws ValidationError naming the
/// offending entity. Called by parse_case after normalization.
void validate(const NetworkCase& c);

}  // namespace gridfdi::net
