#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gridfdi/attack.hpp"

namespace gridfdi::harness {

enum class CaseStudyId { C1, C2, C3, C4_1, C4_2, C4_3 };

CaseStudyId case_study_from_string(const std::string& s);
const char* to_string(CaseStudyId id);

/// Exit codes used by the CLI. 0 means the run completed, whatever the
/// stability verdict was.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitParseError = 2,
  kExitPowerFlowDiverged = 3,
  kExitSynthesisInfeasible = 4,
};

/// Everything a run needs; echoed verbatim into the report so any report
/// can be reproduced byte-for-byte from its own configuration block.
struct RunConfig {
  std::string case_source = "embedded:wscc9";  // or a file path
  std::string case_text;                       // resolved case-file content
  pf::PowerFlowOptions pf;
  std::uint64_t trials = 7500;
  std::uint64_t seed = 1;
  int jobs = 4;
  std::string dist_spec;  // empty = per-channel default distribution
  std::string mask_spec;  // empty = full access
  attack::SynthesisOptions synth;
};

struct Report {
  std::string tool_version;
  std::string kind;  // analyze | casestudy
  std::string case_study;
  std::vector<std::pair<std::string, std::string>> config;  // ordered echo
  std::uint64_t seed = 0;

  // operating point summary
  bool pf_converged = false;
  int pf_iterations = 0;
  double pf_mismatch = 0.0;
  double slack_p_mw = 0.0, slack_q_mvar = 0.0;
  std::vector<int> bus_ids;
  std::vector<double> v_mag, v_ang_deg;
  std::vector<bool> bound_pass;

  // eigenvalue table
  struct Mode {
    double re = 0.0, im = 0.0;
    std::string display;  // fixed 6-decimal rendering; raw values above
    bool unstable = false;
  };
  std::vector<Mode> modes;
  double spectral_abscissa = 0.0;
  bool unstable = false;
  std::string verdict;  // stable | unstable

  // attack section
  bool has_attack = false;
  std::vector<std::string> load_labels;
  std::vector<double> attack_dp_mw, attack_dq_mvar;
  std::vector<std::string> gen_labels;
  std::vector<double> deviation_dp_g_mw;  // aligned with non-slack generators
  std::vector<std::string> nonslack_gen_labels;
  std::vector<double> deviation_dv_g_pu;  // aligned with gen_labels
  double objective = 0.0;
  bool feasible = false;
  std::vector<attack::SynthesisResult::OuterLog> trace;

  // campaign section
  bool has_campaign = false;
  std::uint64_t trials = 0, successes = 0, stables = 0, divergences = 0;
  double success_rate = 0.0;
  std::vector<attack::CampaignStats::Histogram> histograms;
  struct SuccessRow {
    std::uint64_t trial = 0;
    std::vector<double> dp_mw, dq_mvar;
    double abscissa = 0.0;
  };
  std::vector<SuccessRow> success_vectors;
};

/// Full analysis pipeline on a parsed case: power flow, machine init,
/// assembly, eigendecomposition, verdict.
Report analyze(const RunConfig& config);

/// C1 analyzes the base case, C2 runs the random campaign, C3 synthesizes
/// under the full mask, C4.x under the masked scenarios.
Report run_case_study(CaseStudyId id, const RunConfig& config);

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string report_to_csv(const Report& report);

/// format is "json" or "csv".
void emit_report(const Report& report, const std::string& format, std::ostream& sink);

}  // namespace gridfdi::harness
