#pragma once

#include <optional>
#include <vector>

#include "gridfdi/attack.hpp"

namespace gridfdi::attack::detail {

/// One pass of the analysis pipeline: power flow, machine init, Y4'
/// augmentation, assembly, reduction, eigendecomposition. Shared by the
/// base-case analysis and by attack evaluation so a zero attack reproduces
/// the base analysis bit-for-bit. fixed_eprime, when given, overrides the
/// machine EMF magnitudes (case generator order) after init.
struct RawEval {
  pf::OperatingPoint op;
  std::vector<pf::GeneratorOperatingState> states;
  std::optional<sss::StateMatrix> state_matrix;
  std::optional<sss::EigenSolution> eig;
  bool pf_ok = false;
  bool ok = false;  // pf converged and the reduction succeeded
};

RawEval evaluate_raw(const net::NetworkCase& c, const net::AdmittanceMatrix& ybus,
                     const net::YbusPartition& partition,
                     const pf::PowerFlowOptions& options,
                     const Eigen::VectorXcd* warm_start,
                     const std::vector<double>* fixed_eprime);

/// Copy of the base case with the attack applied to the loads and the
/// deviation applied to the generator setpoints.
net::NetworkCase apply_attack(const net::NetworkCase& base, const AttackVector& attack,
                              const SetpointDeviation& deviation);

}  // namespace gridfdi::attack::detail
