#include "drknn/report.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace drknn {
namespace {

using json = nlohmann::ordered_json;

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["dataset"] = c.dataset;
  j["query_file"] = c.query_file;
  j["radii"] = c.radii;
  j["k"] = c.k;
  j["method"] = c.method;
  j["bandwidth"] = c.bandwidth;
  j["tau"] = c.tau;
  j["embedding"] = c.embedding;
  j["standardize"] = c.standardize;
  j["episodes"] = c.episodes;
  j["shots"] = c.shots;
  j["classes"] = c.classes;
  j["queries"] = c.queries;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["grid_step"] = c.grid_step;
  j["cv_grid"] = c.cv_grid;
  j["folds"] = c.folds;
  j["sweep_parameter"] = c.sweep_parameter;
  j["sweep_values"] = c.sweep_values;
  j["out"] = c.out;
  j["table"] = c.table;
  return j;
}

json envelope(const RunConfig& c) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "drknn";
  j["command"] = c.command;
  j["config"] = config_json(c);
  j["results"] = json::object();
  return j;
}

json eval_results_json(const EvalReport& report) {
  json r;
  r["episodes"] = report.episodes;
  r["mean_accuracy"] = report.mean_accuracy;
  r["stddev"] = report.stddev;
  r["accuracies"] = report.accuracies;
  r["chosen_radii"] = report.chosen_radii;
  r["kept_fractions"] = report.kept_fractions;
  return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

[[noreturn]] void config_fail(const std::string& field, const std::string& want) {
  throw std::invalid_argument("config field '" + field + "' must be " + want);
}

double need_number(const json& v, const std::string& field) {
  if (!v.is_number()) config_fail(field, "a number");
  return v.get<double>();
}

long long need_int(const json& v, const std::string& field) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) config_fail(field, "an integer");
  return v.get<long long>();
}

std::string need_string(const json& v, const std::string& field) {
  if (!v.is_string()) config_fail(field, "a string");
  return v.get<std::string>();
}

bool need_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) config_fail(field, "a boolean");
  return v.get<bool>();
}

std::vector<double> need_numbers(const json& v, const std::string& field) {
  if (!v.is_array()) config_fail(field, "an array of numbers");
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) config_fail(field, "an array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

void fmt17(std::string& out, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  out += buffer;
}

[[noreturn]] void report_fail(const std::string& what) {
  throw std::invalid_argument("report: " + what);
}

const json& need_field(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end()) report_fail(std::string(where) + " is missing field '" + key + "'");
  return *it;
}

}  // namespace

RunConfig parse_run_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      c.command = need_string(value, key);
    } else if (key == "dataset") {
      c.dataset = need_string(value, key);
    } else if (key == "query_file") {
      c.query_file = need_string(value, key);
    } else if (key == "radii") {
      c.radii = need_numbers(value, key);
    } else if (key == "k") {
      c.k = static_cast<int>(need_int(value, key));
    } else if (key == "method") {
      c.method = need_string(value, key);
    } else if (key == "bandwidth") {
      c.bandwidth = need_number(value, key);
    } else if (key == "tau") {
      c.tau = need_number(value, key);
    } else if (key == "embedding") {
      c.embedding = need_string(value, key);
    } else if (key == "standardize") {
      c.standardize = need_bool(value, key);
    } else if (key == "episodes") {
      c.episodes = static_cast<int>(need_int(value, key));
    } else if (key == "shots") {
      c.shots = static_cast<int>(need_int(value, key));
    } else if (key == "classes") {
      c.classes = static_cast<int>(need_int(value, key));
    } else if (key == "queries") {
      c.queries = static_cast<int>(need_int(value, key));
    } else if (key == "seed") {
      if (!value.is_number_integer() && !value.is_number_unsigned()) {
        config_fail(key, "an integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "jobs") {
      c.jobs = static_cast<int>(need_int(value, key));
    } else if (key == "grid_step") {
      c.grid_step = need_number(value, key);
    } else if (key == "cv_grid") {
      c.cv_grid = need_numbers(value, key);
    } else if (key == "folds") {
      c.folds = static_cast<int>(need_int(value, key));
    } else if (key == "sweep_parameter") {
      c.sweep_parameter = need_string(value, key);
    } else if (key == "sweep_values") {
      c.sweep_values = need_numbers(value, key);
    } else if (key == "out") {
      c.out = need_string(value, key);
    } else if (key == "table") {
      c.table = need_bool(value, key);
    } else {
      throw std::invalid_argument("config field '" + key + "' is not recognized");
    }
  }
  return c;
}

void validate_report(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    report_fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) report_fail("top level must be an object");
  if (need_field(j, "schema_version", "report").get<int>() != kReportSchemaVersion) {
    report_fail("unsupported schema_version");
  }
  if (need_field(j, "tool", "report").get<std::string>() != "drknn") {
    report_fail("field 'tool' must be \"drknn\"");
  }
  const std::string command = need_field(j, "command", "report").get<std::string>();
  if (!need_field(j, "config", "report").is_object()) {
    report_fail("field 'config' must be an object");
  }
  const json& results = need_field(j, "results", "report");
  if (!results.is_object()) report_fail("field 'results' must be an object");

  const auto need_array = [&](const char* key) {
    if (!need_field(results, key, "results").is_array()) {
      report_fail(std::string("results field '") + key + "' must be an array");
    }
  };
  const auto need_num = [&](const char* key) {
    if (!need_field(results, key, "results").is_number()) {
      report_fail(std::string("results field '") + key + "' must be a number");
    }
  };

  if (command == "lfd") {
    if (!need_field(results, "status", "results").is_string()) {
      report_fail("results field 'status' must be a string");
    }
    need_num("objective");
    need_num("minimax_risk");
    need_array("spend");
    need_array("lfds");
    need_array("plans");
    need_array("decisions");
    const json& duality = need_field(results, "duality", "results");
    if (!duality.is_object()) report_fail("results field 'duality' must be an object");
    need_field(duality, "lfd_value", "duality");
    need_field(duality, "lip_value", "duality");
    need_field(duality, "gap", "duality");
    need_field(duality, "lambda_bound_ok", "duality");
  } else if (command == "classify") {
    need_array("predicted");
    need_array("votes");
  } else if (command == "eval") {
    need_num("episodes");
    need_num("mean_accuracy");
    need_num("stddev");
    need_array("accuracies");
    need_array("chosen_radii");
    need_array("kept_fractions");
  } else if (command == "sweep") {
    if (!need_field(results, "parameter", "results").is_string()) {
      report_fail("results field 'parameter' must be a string");
    }
    need_array("values");
    need_array("points");
  } else if (command == "verify") {
    if (!need_field(results, "all_pass", "results").is_boolean()) {
      report_fail("results field 'all_pass' must be a boolean");
    }
    need_array("checks");
  } else {
    report_fail("unknown command '" + command + "'");
  }
}

std::string lfd_report_json(const RunConfig& config, const LfdSolution& solution,
                            const std::vector<int>& decisions, const DualityReport& duality) {
  json j = envelope(config);
  json& r = j["results"];
  r["status"] = to_string(solution.status);
  r["objective"] = solution.objective;
  r["minimax_risk"] = solution.minimax_risk;
  r["spend"] = to_json(solution.spend);
  json lfds = json::array();
  for (const auto& lfd : solution.lfds) lfds.push_back(to_json(lfd));
  r["lfds"] = std::move(lfds);
  json plans = json::array();
  for (const auto& plan : solution.plans) plans.push_back(to_json(plan));
  r["plans"] = std::move(plans);
  r["decisions"] = decisions;
  json d;
  d["lfd_value"] = duality.lfd_value;
  d["lip_value"] = duality.lip_value;
  d["gap"] = duality.gap;
  d["lambda_bound_ok"] = duality.lambda_bound_ok;
  d["lip_norms"] = to_json(duality.lip_norms);
  r["duality"] = std::move(d);
  return dump(j);
}

std::string classify_report_json(const RunConfig& config, const std::vector<int>& predicted,
                                 const std::vector<VoteVector>& votes) {
  json j = envelope(config);
  json& r = j["results"];
  r["predicted"] = predicted;
  json vote_rows = json::array();
  for (const auto& v : votes) vote_rows.push_back(to_json(v));
  r["votes"] = std::move(vote_rows);
  return dump(j);
}

std::string eval_report_json(const RunConfig& config, const EvalReport& report) {
  json j = envelope(config);
  j["results"] = eval_results_json(report);
  return dump(j);
}

std::string sweep_report_json(const RunConfig& config, const SweepReport& report) {
  json j = envelope(config);
  json& r = j["results"];
  r["parameter"] = report.parameter;
  r["values"] = report.values;
  json points = json::array();
  for (size_t i = 0; i < report.reports.size(); ++i) {
    json point;
    point["value"] = report.values[i];
    point.update(eval_results_json(report.reports[i]));
    points.push_back(std::move(point));
  }
  r["points"] = std::move(points);
  return dump(j);
}

std::string verify_report_json(const RunConfig& config,
                               const oracle::VerificationReport& report) {
  json j = envelope(config);
  json& r = j["results"];
  r["all_pass"] = report.all_pass;
  json checks = json::array();
  for (const auto& check : report.checks) {
    json c;
    c["name"] = check.name;
    c["solver_objective"] = check.solver_objective;
    c["brute_objective"] = check.brute_objective;
    c["objective_bound"] = check.objective_bound;
    c["duality_gap"] = check.duality_gap;
    c["lambda_bound_ok"] = check.lambda_bound_ok;
    c["risk_identity_ok"] = check.risk_identity_ok;
    c["pass"] = check.pass;
    c["detail"] = check.detail;
    checks.push_back(std::move(c));
  }
  r["checks"] = std::move(checks);
  return dump(j);
}

std::string eval_report_csv(const EvalReport& report) {
  std::string out = "episode,accuracy,chosen_radius,kept_fraction\n";
  for (size_t e = 0; e < report.accuracies.size(); ++e) {
    out += std::to_string(e);
    out += ',';
    fmt17(out, report.accuracies[e]);
    out += ',';
    fmt17(out, report.chosen_radii[e]);
    out += ',';
    fmt17(out, report.kept_fractions[e]);
    out += '\n';
  }
  return out;
}

std::string sweep_report_csv(const SweepReport& report) {
  std::string out = "parameter,value,episode,accuracy,chosen_radius,kept_fraction\n";
  for (size_t i = 0; i < report.reports.size(); ++i) {
    const EvalReport& r = report.reports[i];
    for (size_t e = 0; e < r.accuracies.size(); ++e) {
      out += report.parameter;
      out += ',';
      fmt17(out, report.values[i]);
      out += ',';
      out += std::to_string(e);
      out += ',';
      fmt17(out, r.accuracies[e]);
      out += ',';
      fmt17(out, r.chosen_radii[e]);
      out += ',';
      fmt17(out, r.kept_fractions[e]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace drknn
