#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drknn/classify.hpp"
#include "drknn/eval.hpp"
#include "drknn/lfd.hpp"
#include "drknn/oracle.hpp"

namespace drknn {

inline constexpr int kReportSchemaVersion = 1;

/// Fully resolved run configuration. Every report echoes one of these so a
/// run can be reproduced from its output alone.
struct RunConfig {
  std::string command;      // lfd | classify | eval | sweep | verify
  std::string dataset;      // file path or a bundled dataset name
  std::string query_file;   // classify: file with query rows
  std::vector<double> radii;
  int k = 1;
  std::string method = "drknn";
  double bandwidth = 1.0;
  double tau = 0.9;
  std::string embedding;    // path to a saved embedding, empty = none
  bool standardize = false;
  int episodes = 1;
  int shots = 5;
  int classes = 2;
  int queries = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
  double grid_step = 0.05;
  std::vector<double> cv_grid;
  int folds = 5;
  std::string sweep_parameter;
  std::vector<double> sweep_values;
  std::string out;          // output path, empty writes to stdout
  bool table = false;       // also emit a flat CSV table
};

/// Parses a JSON object of RunConfig fields. Unknown keys and wrongly typed
/// values raise std::invalid_argument naming the field. Absent keys keep
/// their defaults.
RunConfig parse_run_config_json(const std::string& json_text);

/// Checks the envelope every report shares (schema_version, tool, command,
/// config, results) plus per-command required result fields. Throws
/// std::invalid_argument naming what is missing or mistyped.
void validate_report(const std::string& json_text);

std::string lfd_report_json(const RunConfig& config, const LfdSolution& solution,
                            const std::vector<int>& decisions, const DualityReport& duality);
std::string classify_report_json(const RunConfig& config, const std::vector<int>& predicted,
                                 const std::vector<VoteVector>& votes);
std::string eval_report_json(const RunConfig& config, const EvalReport& report);
std::string sweep_report_json(const RunConfig& config, const SweepReport& report);
std::string verify_report_json(const RunConfig& config,
                               const oracle::VerificationReport& report);

/// Per-episode rows, one line each, with a header row.
std::string eval_report_csv(const EvalReport& report);
/// Per-(value, episode) rows with a header row.
std::string sweep_report_csv(const SweepReport& report);

}  // namespace drknn
