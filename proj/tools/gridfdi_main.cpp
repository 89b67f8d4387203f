#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gridfdi/cases.hpp"
#include "gridfdi/errors.hpp"
#include "gridfdi/harness.hpp"
#include "gridfdi/version.hpp"

namespace {

using namespace gridfdi;

std::string resolve_case_text(const std::string& source) {
  if (source == "embedded:wscc9") return std::string(net::embedded_wscc9());
  if (source == "embedded:wscc9-canonical")
    return std::string(net::embedded_wscc9_canonical());
  std::ifstream in(source);
  if (!in) throw ParseError("cannot open case file '" + source + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_report(const harness::Report& report, const std::string& format,
                  const std::string& out, const std::string& default_name) {
  std::string path = out;
  if (path.empty()) {
    if (const char* dir = std::getenv("GRIDFDI_OUT_DIR"); dir && *dir) {
      path = (std::filesystem::path(dir) / (default_name + "." + format)).string();
    }
  }
  if (path.empty()) {
    harness::emit_report(report, format, std::cout);
    return;
  }
  std::ofstream sink(path, std::ios::binary);
  if (!sink) throw std::runtime_error("cannot open output file '" + path + "'");
  harness::emit_report(report, format, sink);
  std::cerr << "report written to " << path << "\n";
}

struct CommonFlags {
  std::string case_source = "embedded:wscc9";
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--case", flags.case_source,
                  "case file path, embedded:wscc9 or embedded:wscc9-canonical");
  cmd->add_option("--format", flags.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", flags.out,
                  "output path (default: $GRIDFDI_OUT_DIR/<name>.<format> or stdout)");
}

void add_synth_flags(CLI::App* cmd, harness::RunConfig& cfg) {
  cmd->add_option("--epsilon", cfg.synth.epsilon_unstable,
                  "required spectral abscissa, 1/s");
  cmd->add_option("--starts", cfg.synth.multi_start, "multi-start count");
  cmd->add_option("--weight-p", cfg.synth.weight_p, "objective weight on P deviations");
  cmd->add_option("--weight-v", cfg.synth.weight_v, "objective weight on V deviations");
  cmd->add_option("--load-box", cfg.synth.load_box_factor,
                  "attack box, multiples of each channel's base magnitude");
}

int exit_code_for(const harness::Report& report) {
  if (!report.pf_converged) return harness::kExitPowerFlowDiverged;
  if (report.has_attack && !report.feasible) return harness::kExitSynthesisInfeasible;
  return harness::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power-grid small-signal stability and load-measurement attack toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  harness::RunConfig cfg;
  CommonFlags common;

  auto* analyze = app.add_subcommand("analyze", "power flow + eigenvalue analysis");
  add_common(analyze, common);
  analyze->add_option("--tol", cfg.pf.tol, "power-flow mismatch tolerance, pu");
  analyze->add_option("--max-iter", cfg.pf.max_iter, "power-flow iteration cap");

  auto* attack_cmd = app.add_subcommand("attack", "attack campaigns and synthesis");
  attack_cmd->require_subcommand(1);
  auto* random = attack_cmd->add_subcommand("random", "Monte-Carlo random-attack campaign");
  add_common(random, common);
  random->add_option("--trials", cfg.trials, "number of random attack vectors");
  random->add_option("--seed", cfg.seed, "campaign seed");
  random->add_option("--dist", cfg.dist_spec, "uniform:p=[lo,hi],q=[lo,hi] (MW/MVAr)");
  random->add_option("--mask", cfg.mask_spec, "access mask, e.g. L1:pq,L3:pq or *:p");
  random->add_option("--jobs", cfg.jobs, "parallel workers");

  auto* synth = attack_cmd->add_subcommand("synth", "synthesize a destabilizing attack");
  add_common(synth, common);
  synth->add_option("--mask", cfg.mask_spec, "access mask, e.g. L1:pq,L3:pq or *:p");
  synth->add_option("--seed", cfg.seed, "multi-start seed");
  add_synth_flags(synth, cfg);

  std::string study;
  auto* casestudy = app.add_subcommand("casestudy", "run one of the case studies");
  casestudy->add_option("id", study, "C1, C2, C3, C4.1, C4.2 or C4.3")->required();
  add_common(casestudy, common);
  casestudy->add_option("--trials", cfg.trials, "C2: number of random attack vectors");
  casestudy->add_option("--seed", cfg.seed, "rng seed");
  casestudy->add_option("--dist", cfg.dist_spec, "C2: uniform:p=[lo,hi],q=[lo,hi]");
  casestudy->add_option("--mask", cfg.mask_spec, "access mask override");
  casestudy->add_option("--jobs", cfg.jobs, "C2: parallel workers");
  add_synth_flags(casestudy, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.case_source = common.case_source;
    cfg.case_text = resolve_case_text(common.case_source);

    harness::Report report;
    std::string name;
    if (*analyze) {
      report = harness::analyze(cfg);
      name = "analyze";
    } else if (*random) {
      report = harness::run_case_study(harness::CaseStudyId::C2, cfg);
      report.kind = "attack-random";
      report.case_study = "";
      name = "attack_random";
    } else if (*synth) {
      report = harness::run_case_study(harness::CaseStudyId::C3, cfg);
      report.kind = "attack-synth";
      report.case_study = "";
      name = "attack_synth";
    } else {
      const auto id = harness::case_study_from_string(study);
      report = harness::run_case_study(id, cfg);
      name = std::string("casestudy_") + harness::to_string(id);
    }
    write_report(report, common.format, common.out, name);
    return exit_code_for(report);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return harness::kExitParseError;
  } catch (const ValidationError& e) {
    std::cerr << "case error: " << e.what() << "\n";
    return harness::kExitParseError;
  } catch (const ConvergenceError& e) {
    std::cerr << "power flow error: " << e.what() << "\n";
    return harness::kExitPowerFlowDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitInternal;
  }
}
