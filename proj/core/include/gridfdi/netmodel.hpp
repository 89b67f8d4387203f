#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "gridfdi/types.hpp"

namespace gridfdi::net {

/// Parses the JSON case format. Unknown keys are rejected, defaults are
/// filled in, bus ids are normalized to 1..n, and the result is validated.
NetworkCase parse_case(const std::string& text);

/// Inverse of parse_case up to structural identity: the emitted text
/// reparses into an equal case.
std::string serialize_case(const NetworkCase& c);

/// Bus admittance matrix together with its equivalent real block form,
/// where entry (n,m) is the 2x2 block [[G_nm, -B_nm], [B_nm, G_nm]] acting
/// on interleaved [Vr_1, Vi_1, ..., Vr_n, Vi_n] vectors.
struct AdmittanceMatrix {
  Eigen::MatrixXcd y;
  Eigen::MatrixXd block_form() const;
};

/// Standard Y-bus: series admittance 1/(r+jx), tap on the from side,
/// half of b_sh as a shunt at each end. Throws NumericError for a branch
/// with r = x = 0.
AdmittanceMatrix build_ybus(const NetworkCase& c);

/// Block form of Y reordered so generator buses come first. y1 is 2g x 2g,
/// y4 is 2l x 2l; gen_buses/load_buses record the ordering (ascending ids).
struct YbusPartition {
  Eigen::MatrixXd y1, y2, y3, y4;
  std::vector<int> gen_buses;
  std::vector<int> load_buses;
};

YbusPartition partition_ybus(const AdmittanceMatrix& y, const NetworkCase& c);

/// Reassembles the permuted block form from a partition (test aid; inverse
/// of partition_ybus up to the canonical bus permutation).
Eigen::MatrixXd reassemble_partition(const YbusPartition& p);

/// Adds the constant-impedance load admittances G_L = P/|V|^2, B_L = Q/|V|^2
/// onto the diagonal blocks of y4:
///   [[G_nn + G_L, -B_nn + B_L], [B_nn - B_L, G_nn + G_L]].
/// v_load holds the operating-point voltage per load bus, aligned with
/// load_buses. Throws NumericError on a zero voltage magnitude and
/// ValidationError if a load sits on a bus outside load_buses.
Eigen::MatrixXd augment_load_admittance(const Eigen::MatrixXd& y4,
                                        const std::vector<int>& load_buses,
                                        const std::vector<LoadSpec>& loads,
                                        double base_mva,
                                        const Eigen::VectorXcd& v_load);

}  // namespace gridfdi::net
