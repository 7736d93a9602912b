#include "cli_app.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "drknn/classify.hpp"
#include "drknn/dataset.hpp"
#include "drknn/embedding.hpp"
#include "drknn/eval.hpp"
#include "drknn/lfd.hpp"
#include "drknn/oracle.hpp"
#include "drknn/report.hpp"
#include "drknn/rng.hpp"

namespace drknn::cli {
namespace {

Dataset builtin_two_point() {
  std::vector<LabeledSample> samples;
  Eigen::VectorXd a(1), b(1);
  a << 0.0;
  b << 1.0;
  samples.push_back({a, 1});
  samples.push_back({b, 2});
  return make_dataset(std::move(samples));
}

Dataset builtin_six_point() {
  // Two well-separated triples whose inner corners face each other, so the
  // facing pair carries the class boundary.
  const double coords[6][2] = {{0, 0}, {0, 2}, {1, 1}, {3, 0}, {3, 2}, {2, 1}};
  const int labels[6] = {1, 1, 1, 2, 2, 2};
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 6; ++i) {
    Eigen::VectorXd x(2);
    x << coords[i][0], coords[i][1];
    samples.push_back({x, labels[i]});
  }
  return make_dataset(std::move(samples));
}

Dataset resolve_dataset(const RunConfig& cfg) {
  if (cfg.dataset.empty()) {
    throw std::invalid_argument("config field 'dataset' is required for command '" +
                                cfg.command + "'");
  }
  if (cfg.dataset == "two_point") return builtin_two_point();
  if (cfg.dataset == "six_point") return builtin_six_point();
  if (cfg.dataset == "two_gaussians") {
    return make_two_gaussians(150, 2.5, 0.2, cfg.seed);
  }
  return load_dataset(cfg.dataset);
}

// Rows of features with no label column; same delimiters and optional
// header as the dataset format.
std::vector<Eigen::VectorXd> load_query_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open query file: " + path);
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  int line_number = 0;
  bool first_content_row = true;
  Eigen::Index dim = -1;
  while (std::getline(in, line)) {
    ++line_number;
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
      if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
        if (!current.empty()) {
          fields.push_back(current);
          current.clear();
        }
      } else {
        current.push_back(ch);
      }
    }
    if (!current.empty()) fields.push_back(current);
    if (fields.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_number);
    Eigen::VectorXd row(static_cast<Eigen::Index>(fields.size()));
    bool numeric = true;
    for (size_t f = 0; f < fields.size(); ++f) {
      try {
        size_t pos = 0;
        row(static_cast<Eigen::Index>(f)) = std::stod(fields[f], &pos);
        if (pos != fields[f].size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (!numeric) {
      if (first_content_row) {
        first_content_row = false;  // header row
        continue;
      }
      throw std::invalid_argument(where + ": non-numeric query value");
    }
    first_content_row = false;
    if (!row.allFinite()) throw std::invalid_argument(where + ": non-finite query value");
    if (dim < 0) {
      dim = row.size();
    } else if (row.size() != dim) {
      throw std::invalid_argument(where + ": row has " + std::to_string(row.size()) +
                                  " value(s), expected " + std::to_string(dim));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(path + ": no query rows found");
  return rows;
}

// Standardizer and embedding, fit/loaded once and applied to both the
// training set and any queries.
struct Transforms {
  std::optional<Standardizer> standardizer;
  std::optional<LinearEmbedding> embedding;

  Eigen::VectorXd map(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = x;
    if (standardizer) y = apply(*standardizer, y);
    if (embedding) y = transform(*embedding, y);
    return y;
  }

  Dataset map(const Dataset& dataset) const {
    if (!standardizer && !embedding) return dataset;
    std::vector<LabeledSample> samples;
    samples.reserve(dataset.samples.size());
    for (const auto& s : dataset.samples) samples.push_back({map(s.features), s.label});
    return make_dataset(std::move(samples), dataset.class_count);
  }
};

Transforms make_transforms(const RunConfig& cfg, const Dataset& train) {
  Transforms t;
  if (cfg.standardize) t.standardizer = fit_standardizer(train);
  if (!cfg.embedding.empty()) {
    LinearEmbedding emb = load_embedding(cfg.embedding);
    const int expect = t.standardizer ? static_cast<int>(t.standardizer->mean.size())
                                      : train.dim();
    if (emb.input_dim() != expect) {
      throw std::invalid_argument("config field 'embedding': projection expects dimension " +
                                  std::to_string(emb.input_dim()) + ", data has " +
                                  std::to_string(expect));
    }
    t.embedding = std::move(emb);
  }
  return t;
}

RadiusVector radii_from(const RunConfig& cfg, int classes) {
  if (cfg.radii.empty()) {
    throw std::invalid_argument("config field 'radii' is required for command '" +
                                cfg.command + "'");
  }
  if (cfg.radii.size() == 1) return RadiusVector::Constant(classes, cfg.radii[0]);
  if (static_cast<int>(cfg.radii.size()) != classes) {
    throw std::invalid_argument("config field 'radii' has " +
                                std::to_string(cfg.radii.size()) + " entries, dataset has " +
                                std::to_string(classes) + " classes");
  }
  return Eigen::Map<const Eigen::VectorXd>(cfg.radii.data(),
                                           static_cast<Eigen::Index>(cfg.radii.size()));
}

ClassifierConfig classifier_from(const RunConfig& cfg) {
  ClassifierConfig c;
  try {
    c.kind = parse_classifier_kind(cfg.method);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config field 'method': ") + e.what());
  }
  c.k = cfg.k;
  c.bandwidth = cfg.bandwidth;
  c.tau = cfg.tau;
  c.cv_grid = cfg.cv_grid;
  c.cv_folds = cfg.folds;
  c.seed = cfg.seed;
  if (cfg.radii.size() == 1) {
    c.shared_radius = cfg.radii[0];
  } else if (!cfg.radii.empty()) {
    c.radii = Eigen::Map<const Eigen::VectorXd>(cfg.radii.data(),
                                                static_cast<Eigen::Index>(cfg.radii.size()));
  }
  return c;
}

void emit(const RunConfig& cfg, const std::string& json_text, const std::string& csv_text,
          std::ostream& out) {
  validate_report(json_text);  // every emitted report passes its own schema
  if (cfg.out.empty()) {
    out << json_text;
  } else {
    std::ofstream file(cfg.out);
    if (!file) {
      throw std::invalid_argument("config field 'out': cannot open file " + cfg.out);
    }
    file << json_text;
  }
  if (cfg.table) {
    std::ofstream file(cfg.out + ".csv");
    if (!file) {
      throw std::invalid_argument("config field 'out': cannot open file " + cfg.out + ".csv");
    }
    file << csv_text;
  }
}

void check_table_flag(const RunConfig& cfg) {
  if (!cfg.table) return;
  if (cfg.command != "eval" && cfg.command != "sweep") {
    throw std::invalid_argument("config field 'table' applies to eval and sweep only");
  }
  if (cfg.out.empty()) {
    throw std::invalid_argument("config field 'table' requires 'out' (the CSV lands at out + \".csv\")");
  }
}

int cmd_lfd(const RunConfig& cfg, std::ostream& out) {
  const Dataset raw = resolve_dataset(cfg);
  const Dataset dataset = make_transforms(cfg, raw).map(raw);
  const RadiusVector radii = radii_from(cfg, dataset.class_count);
  const LfdSolution sol = solve_lfd(dataset, radii);
  if (sol.status != SolverStatus::optimal) {
    throw NumericalError("least-favorable solve failed: " + to_string(sol.status) +
                         (sol.message.empty() ? "" : " (" + sol.message + ")"));
  }
  const std::vector<int> decisions = optimal_classifier(sol);
  const DualityReport duality =
      duality_report(empirical_distributions(dataset), euclidean_cost(dataset), radii);
  emit(cfg, lfd_report_json(cfg, sol, decisions, duality), "", out);
  return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.query_file.empty()) {
    throw std::invalid_argument("config field 'query_file' is required for command 'classify'");
  }
  const Dataset raw = resolve_dataset(cfg);
  const Transforms transforms = make_transforms(cfg, raw);
  const Dataset train = transforms.map(raw);
  std::vector<LabeledSample> query_samples;
  for (const Eigen::VectorXd& row : load_query_rows(cfg.query_file)) {
    if (row.size() != raw.dim()) {
      throw std::invalid_argument("config field 'query_file': rows have " +
                                  std::to_string(row.size()) + " values, dataset features have " +
                                  std::to_string(raw.dim()));
    }
    query_samples.push_back({transforms.map(row), 1});
  }
  const Dataset queries = make_dataset(std::move(query_samples), 1);
  const EvalResult result = evaluate(train, queries, classifier_from(cfg));
  emit(cfg, classify_report_json(cfg, result.predicted, result.votes), "", out);
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const Dataset raw = resolve_dataset(cfg);
  const Dataset pool = make_transforms(cfg, raw).map(raw);
  EpisodeSpec spec;
  spec.classes = cfg.classes;
  spec.shots = cfg.shots;
  spec.query_count = cfg.queries;
  spec.seed = cfg.seed;
  const EvalReport report =
      run_episodes(pool, spec, cfg.episodes, classifier_from(cfg), cfg.jobs);
  emit(cfg, eval_report_json(cfg, report), eval_report_csv(report), out);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sweep_parameter.empty()) {
    throw std::invalid_argument("config field 'sweep_parameter' is required for command 'sweep'");
  }
  if (cfg.sweep_values.empty()) {
    throw std::invalid_argument("config field 'sweep_values' is required for command 'sweep'");
  }
  const Dataset raw = resolve_dataset(cfg);
  const Dataset pool = make_transforms(cfg, raw).map(raw);
  EpisodeSpec spec;
  spec.classes = cfg.classes;
  spec.shots = cfg.shots;
  spec.query_count = cfg.queries;
  spec.seed = cfg.seed;
  const SweepReport report = sweep(pool, spec, cfg.episodes, classifier_from(cfg),
                                   cfg.sweep_parameter, cfg.sweep_values, cfg.jobs);
  emit(cfg, sweep_report_json(cfg, report), sweep_report_csv(report), out);
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  oracle::VerificationReport report;
  if (cfg.dataset.empty()) {
    report = oracle::run_verification();
  } else {
    const Dataset raw = resolve_dataset(cfg);
    const Dataset dataset = make_transforms(cfg, raw).map(raw);
    oracle::TinyInstance instance;
    instance.name = cfg.dataset;
    instance.empirical = empirical_distributions(dataset);
    instance.cost = euclidean_cost(dataset);
    instance.radii = radii_from(cfg, dataset.class_count);
    instance.resolution = cfg.grid_step;
    report.checks.push_back(oracle::verify_instance(instance));
    report.all_pass = report.checks.front().pass;
  }
  emit(cfg, verify_report_json(cfg, report), "", out);
  return report.all_pass ? 0 : 3;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig flags;
  std::string command;
  std::string config_path;

  CLI::App app{"distributionally robust weighted k-nearest-neighbor toolkit"};
  app.name("drknn");
  app.add_option("command", command, "one of: lfd, classify, eval, sweep, verify");
  app.add_option("--config", config_path,
                 "JSON file of config fields; explicit flags override it");

  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overlays;
  const auto bind = [&overlays](CLI::Option* option, std::function<void(RunConfig&)> copy) {
    overlays.emplace_back(option, std::move(copy));
  };

  bind(app.add_option("--dataset", flags.dataset,
                      "dataset file, or a builtin: two_point, six_point, two_gaussians"),
       [&flags](RunConfig& c) { c.dataset = flags.dataset; });
  bind(app.add_option("--query-file", flags.query_file, "feature rows to classify"),
       [&flags](RunConfig& c) { c.query_file = flags.query_file; });
  bind(app.add_option("--radii", flags.radii, "transport budgets: one shared or one per class")
           ->delimiter(','),
       [&flags](RunConfig& c) { c.radii = flags.radii; });
  bind(app.add_option("--k", flags.k, "neighbors consulted per query"),
       [&flags](RunConfig& c) { c.k = flags.k; });
  bind(app.add_option("--method", flags.method,
                      "drknn, truncated_drknn, vanilla, inverse_distance, kernel, "
                      "uniform_random"),
       [&flags](RunConfig& c) { c.method = flags.method; });
  bind(app.add_option("--bandwidth", flags.bandwidth, "kernel bandwidth"),
       [&flags](RunConfig& c) { c.bandwidth = flags.bandwidth; });
  bind(app.add_option("--tau", flags.tau, "entropy truncation threshold in [0,1]"),
       [&flags](RunConfig& c) { c.tau = flags.tau; });
  bind(app.add_option("--embedding", flags.embedding, "saved linear embedding to apply"),
       [&flags](RunConfig& c) { c.embedding = flags.embedding; });
  bind(app.add_flag("--standardize", flags.standardize, "z-score features first"),
       [&flags](RunConfig& c) { c.standardize = flags.standardize; });
  bind(app.add_option("--episodes", flags.episodes, "episodes to run"),
       [&flags](RunConfig& c) { c.episodes = flags.episodes; });
  bind(app.add_option("--shots", flags.shots, "training samples per class per episode"),
       [&flags](RunConfig& c) { c.shots = flags.shots; });
  bind(app.add_option("--classes", flags.classes, "classes per episode"),
       [&flags](RunConfig& c) { c.classes = flags.classes; });
  bind(app.add_option("--queries", flags.queries, "query samples per episode"),
       [&flags](RunConfig& c) { c.queries = flags.queries; });
  bind(app.add_option("--seed", flags.seed, "root seed for all sampling"),
       [&flags](RunConfig& c) { c.seed = flags.seed; });
  bind(app.add_option("--jobs", flags.jobs, "worker threads for episodes"),
       [&flags](RunConfig& c) { c.jobs = flags.jobs; });
  bind(app.add_option("--grid-step", flags.grid_step,
                      "verification grid resolution (must divide 1)"),
       [&flags](RunConfig& c) { c.grid_step = flags.grid_step; });
  bind(app.add_option("--cv-grid", flags.cv_grid,
                      "candidate shared budgets for cross-validation")
           ->delimiter(','),
       [&flags](RunConfig& c) { c.cv_grid = flags.cv_grid; });
  bind(app.add_option("--folds", flags.folds, "cross-validation folds"),
       [&flags](RunConfig& c) { c.folds = flags.folds; });
  bind(app.add_option("--sweep-parameter", flags.sweep_parameter,
                      "k, bandwidth, tau, or radius"),
       [&flags](RunConfig& c) { c.sweep_parameter = flags.sweep_parameter; });
  bind(app.add_option("--sweep-values", flags.sweep_values, "values the sweep visits")
           ->delimiter(','),
       [&flags](RunConfig& c) { c.sweep_values = flags.sweep_values; });
  bind(app.add_option("--out", flags.out, "write the JSON report here instead of stdout"),
       [&flags](RunConfig& c) { c.out = flags.out; });
  bind(app.add_flag("--table", flags.table, "also write a CSV table next to --out"),
       [&flags](RunConfig& c) { c.table = flags.table; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "drknn: " << e.what() << "\n";
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) {
        throw std::invalid_argument("config field 'config': cannot open file " + config_path);
      }
      std::stringstream buffer;
      buffer << file.rdbuf();
      cfg = parse_run_config_json(buffer.str());
    }
    for (const auto& [option, copy] : overlays) {
      if (option->count() > 0) copy(cfg);
    }
    if (!command.empty()) cfg.command = command;
    check_table_flag(cfg);

    if (cfg.command == "lfd") return cmd_lfd(cfg, out);
    if (cfg.command == "classify") return cmd_classify(cfg, out);
    if (cfg.command == "eval") return cmd_eval(cfg, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    throw std::invalid_argument(
        "config field 'command' must be one of lfd, classify, eval, sweep, verify");
  } catch (const NumericalError& e) {
    err << "drknn: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "drknn: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "drknn: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace drknn::cli
