#include "drknn/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "drknn/rng.hpp"

namespace drknn {
namespace {

// Substream tag separating the chance classifier's draws from episode
// sampling on the same root seed.
constexpr std::uint64_t kGuessStream = 0xC1A551F1ULL;

RadiusVector resolve_radii(const ClassifierConfig& config, const Dataset& train,
                           double& chosen_radius) {
  const int M = train.class_count;
  if (config.radii.size() > 0) {
    if (config.radii.size() != M) {
      throw std::invalid_argument("radii has " + std::to_string(config.radii.size()) +
                                  " entries, dataset has " + std::to_string(M) + " classes");
    }
    return config.radii;
  }
  if (config.shared_radius >= 0.0) {
    return RadiusVector::Constant(M, config.shared_radius);
  }
  if (!config.cv_grid.empty()) {
    const CvChoice choice =
        cross_validate_radius(train, config.k, config.cv_grid, config.cv_folds);
    chosen_radius = choice.radius;
    return RadiusVector::Constant(M, choice.radius);
  }
  throw std::invalid_argument(
      "least-favorable classifiers need radii, a shared_radius, or a cv_grid");
}

void check_query_set(const Dataset& train, const Dataset& queries) {
  if (queries.dim() != train.dim()) {
    throw std::invalid_argument("query dimension " + std::to_string(queries.dim()) +
                                " differs from training dimension " +
                                std::to_string(train.dim()));
  }
  if (queries.class_count > train.class_count) {
    throw std::invalid_argument("queries use " + std::to_string(queries.class_count) +
                                " classes, training set has " +
                                std::to_string(train.class_count));
  }
}

double sample_stddev(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

Dataset subset(const Dataset& source, const std::vector<int>& indices) {
  std::vector<LabeledSample> samples;
  samples.reserve(indices.size());
  for (int i : indices) samples.push_back(source.samples[static_cast<size_t>(i)]);
  return make_dataset(std::move(samples), source.class_count);
}

}  // namespace

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::drknn: return "drknn";
    case ClassifierKind::truncated_drknn: return "truncated_drknn";
    case ClassifierKind::vanilla: return "vanilla";
    case ClassifierKind::inverse_distance: return "inverse_distance";
    case ClassifierKind::kernel: return "kernel";
    case ClassifierKind::uniform_random: return "uniform_random";
  }
  return "unknown";
}

ClassifierKind parse_classifier_kind(const std::string& name) {
  if (name == "drknn") return ClassifierKind::drknn;
  if (name == "truncated_drknn") return ClassifierKind::truncated_drknn;
  if (name == "vanilla") return ClassifierKind::vanilla;
  if (name == "inverse_distance") return ClassifierKind::inverse_distance;
  if (name == "kernel") return ClassifierKind::kernel;
  if (name == "uniform_random") return ClassifierKind::uniform_random;
  throw std::invalid_argument("unknown classifier kind: '" + name + "'");
}

Episode sample_episode(const Dataset& pool, const EpisodeSpec& spec) {
  const int M = spec.classes;
  const int K = spec.shots;
  const int Q = spec.query_count;
  if (M < 1) throw std::invalid_argument("episode needs at least 1 class");
  if (K < 1) throw std::invalid_argument("episode needs at least 1 shot per class");
  if (Q < 1) throw std::invalid_argument("episode needs at least 1 query");
  if (pool.class_count < M) {
    throw std::invalid_argument("episode asks for " + std::to_string(M) +
                                " classes, pool has " + std::to_string(pool.class_count));
  }
  Rng rng(spec.seed);
  std::vector<int> pool_labels(static_cast<size_t>(pool.class_count));
  std::iota(pool_labels.begin(), pool_labels.end(), 1);
  rng.shuffle(pool_labels);
  pool_labels.resize(static_cast<size_t>(M));

  Episode episode;
  episode.class_map = pool_labels;
  std::vector<LabeledSample> train_samples;
  std::vector<LabeledSample> query_samples;
  for (int m = 0; m < M; ++m) {
    const int pool_label = pool_labels[static_cast<size_t>(m)];
    const int want_queries = Q / M + (m < Q % M ? 1 : 0);
    std::vector<int> indices = pool.class_indices(pool_label);
    const int need = K + want_queries;
    if (static_cast<int>(indices.size()) < need) {
      throw std::invalid_argument("pool class " + std::to_string(pool_label) + " has " +
                                  std::to_string(indices.size()) + " samples, episode needs " +
                                  std::to_string(need));
    }
    rng.shuffle(indices);
    for (int t = 0; t < K; ++t) {
      train_samples.push_back(
          {pool.samples[static_cast<size_t>(indices[static_cast<size_t>(t)])].features, m + 1});
    }
    for (int t = K; t < need; ++t) {
      query_samples.push_back(
          {pool.samples[static_cast<size_t>(indices[static_cast<size_t>(t)])].features, m + 1});
    }
  }
  episode.train = make_dataset(std::move(train_samples), M);
  episode.queries = make_dataset(std::move(query_samples), M);
  return episode;
}

EvalResult evaluate(const Dataset& train, const Dataset& queries,
                    const ClassifierConfig& config) {
  check_query_set(train, queries);
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  const bool uses_neighbors = config.kind != ClassifierKind::uniform_random;
  if (uses_neighbors && config.k > train.size()) {
    throw std::invalid_argument("k = " + std::to_string(config.k) + " exceeds the " +
                                std::to_string(train.size()) + " training samples");
  }

  EvalResult result;
  result.total = queries.size();
  result.predicted.reserve(static_cast<size_t>(queries.size()));

  std::vector<DistVector> lfds;
  TruncatedSet kept;
  const bool needs_lfd = config.kind == ClassifierKind::drknn ||
                         config.kind == ClassifierKind::truncated_drknn;
  if (needs_lfd) {
    const RadiusVector radii = resolve_radii(config, train, result.chosen_radius);
    const LfdSolution sol = solve_lfd(train, radii);
    if (sol.status != SolverStatus::optimal) {
      throw NumericalError("least-favorable solve failed: " + to_string(sol.status) +
                           (sol.message.empty() ? "" : " (" + sol.message + ")"));
    }
    lfds = sol.lfds;
    if (config.kind == ClassifierKind::truncated_drknn) {
      kept = truncate(lfds, config.tau);
      result.kept_fraction =
          static_cast<double>(kept.kept.size()) / static_cast<double>(train.size());
    }
  }

  Rng guess(derive_stream(config.seed, kGuessStream));
  for (int q = 0; q < queries.size(); ++q) {
    const Eigen::VectorXd& x = queries.samples[static_cast<size_t>(q)].features;
    VoteVector votes;
    int label = 0;
    switch (config.kind) {
      case ClassifierKind::drknn:
        votes = drknn_votes(lfds, neighbor_order(train, x), config.k);
        break;
      case ClassifierKind::truncated_drknn:
        votes = truncated_drknn_votes(lfds, kept, train, x, config.k);
        break;
      case ClassifierKind::vanilla:
        votes = vanilla_knn_votes(train, neighbor_order(train, x), config.k);
        break;
      case ClassifierKind::inverse_distance:
        votes = inverse_distance_votes(train, x, neighbor_order(train, x), config.k);
        break;
      case ClassifierKind::kernel:
        votes = kernel_votes(train, x, neighbor_order(train, x), config.k, config.bandwidth);
        break;
      case ClassifierKind::uniform_random:
        votes = VoteVector::Constant(train.class_count, 1.0 / train.class_count);
        label = guess.uniform_index(train.class_count) + 1;
        break;
    }
    if (config.kind != ClassifierKind::uniform_random) label = classify(votes);
    result.votes.push_back(votes);
    result.predicted.push_back(label);
    if (label == queries.samples[static_cast<size_t>(q)].label) ++result.correct;
  }
  result.accuracy =
      result.total > 0 ? static_cast<double>(result.correct) / result.total : 0.0;
  return result;
}

CvChoice cross_validate_radius(const Dataset& train, int k, const std::vector<double>& grid,
                               int folds) {
  if (grid.empty()) throw std::invalid_argument("cross-validation grid is empty");
  for (double r : grid) {
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("cross-validation budgets must be finite and nonnegative");
    }
  }
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (folds > train.size()) {
    throw std::invalid_argument("folds = " + std::to_string(folds) + " exceeds the " +
                                std::to_string(train.size()) + " training samples");
  }

  // Deal each class round-robin so every training fold keeps all classes.
  std::vector<int> fold_of(static_cast<size_t>(train.size()), 0);
  for (int m = 1; m <= train.class_count; ++m) {
    const std::vector<int> indices = train.class_indices(m);
    if (indices.size() < 2) {
      throw std::invalid_argument("class " + std::to_string(m) +
                                  " has fewer than 2 samples, cannot stratify");
    }
    for (size_t t = 0; t < indices.size(); ++t) {
      fold_of[static_cast<size_t>(indices[t])] = static_cast<int>(t) % folds;
    }
  }

  CvChoice choice;
  choice.grid = grid;
  std::sort(choice.grid.begin(), choice.grid.end());
  choice.grid.erase(std::unique(choice.grid.begin(), choice.grid.end()), choice.grid.end());

  bool first = true;
  for (double radius : choice.grid) {
    int correct = 0;
    int total = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<int> held;
      std::vector<int> rest;
      for (int i = 0; i < train.size(); ++i) {
        (fold_of[static_cast<size_t>(i)] == f ? held : rest).push_back(i);
      }
      if (held.empty()) continue;
      const Dataset fit = subset(train, rest);
      const Dataset val = subset(train, held);
      const LfdSolution sol =
          solve_lfd(fit, RadiusVector::Constant(train.class_count, radius));
      if (sol.status != SolverStatus::optimal) {
        throw NumericalError("cross-validation solve failed at budget " +
                             std::to_string(radius) + ": " + to_string(sol.status));
      }
      const int k_eff = std::min(k, fit.size());
      for (int q = 0; q < val.size(); ++q) {
        const auto& x = val.samples[static_cast<size_t>(q)].features;
        const int label = classify(drknn_votes(sol.lfds, neighbor_order(fit, x), k_eff));
        if (label == val.samples[static_cast<size_t>(q)].label) ++correct;
        ++total;
      }
    }
    const double accuracy = total > 0 ? static_cast<double>(correct) / total : 0.0;
    choice.grid_accuracy.push_back(accuracy);
    if (first || accuracy > choice.accuracy) {
      choice.accuracy = accuracy;
      choice.radius = radius;
      first = false;
    }
  }
  return choice;
}

EvalReport run_episodes(const Dataset& pool, const EpisodeSpec& spec, int episodes,
                        const ClassifierConfig& config, int jobs) {
  if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  std::vector<EvalResult> results(static_cast<size_t>(episodes));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(episodes));

  const auto run_one = [&](int e) {
    try {
      EpisodeSpec episode_spec = spec;
      episode_spec.seed = derive_stream(spec.seed, static_cast<std::uint64_t>(e));
      const Episode episode = sample_episode(pool, episode_spec);
      ClassifierConfig episode_config = config;
      episode_config.seed = episode_spec.seed;
      results[static_cast<size_t>(e)] =
          evaluate(episode.train, episode.queries, episode_config);
    } catch (...) {
      errors[static_cast<size_t>(e)] = std::current_exception();
    }
  };

  const int workers = std::min(jobs, episodes);
  if (workers <= 1) {
    for (int e = 0; e < episodes; ++e) run_one(e);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (int e = next.fetch_add(1); e < episodes; e = next.fetch_add(1)) run_one(e);
      });
    }
    for (auto& t : threads) t.join();
  }
  for (int e = 0; e < episodes; ++e) {
    if (errors[static_cast<size_t>(e)]) std::rethrow_exception(errors[static_cast<size_t>(e)]);
  }

  EvalReport report;
  report.episodes = episodes;
  for (const auto& r : results) {
    report.accuracies.push_back(r.accuracy);
    report.chosen_radii.push_back(r.chosen_radius);
    report.kept_fractions.push_back(r.kept_fraction);
  }
  report.mean_accuracy =
      std::accumulate(report.accuracies.begin(), report.accuracies.end(), 0.0) / episodes;
  report.stddev = sample_stddev(report.accuracies);
  return report;
}

SweepReport sweep(const Dataset& pool, const EpisodeSpec& spec, int episodes,
                  const ClassifierConfig& base, const std::string& parameter,
                  const std::vector<double>& values, int jobs) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  SweepReport report;
  report.parameter = parameter;
  report.values = values;
  for (double value : values) {
    ClassifierConfig config = base;
    if (parameter == "k") {
      const int k = static_cast<int>(std::lround(value));
      if (std::abs(value - k) > 1e-9) {
        throw std::invalid_argument("k sweep values must be integers, got " +
                                    std::to_string(value));
      }
      config.k = k;
    } else if (parameter == "bandwidth") {
      config.bandwidth = value;
    } else if (parameter == "tau") {
      config.tau = value;
    } else if (parameter == "radius") {
      config.shared_radius = value;
      config.radii = RadiusVector();
      config.cv_grid.clear();
    } else {
      throw std::invalid_argument("unknown sweep parameter: '" + parameter + "'");
    }
    report.reports.push_back(run_episodes(pool, spec, episodes, config, jobs));
  }
  return report;
}

Dataset make_two_gaussians(int per_class, double separation, double label_noise,
                           std::uint64_t seed) {
  if (per_class < 1) throw std::invalid_argument("per_class must be at least 1");
  if (!(separation >= 0.0)) throw std::invalid_argument("separation must be nonnegative");
  if (!(label_noise >= 0.0 && label_noise < 1.0)) {
    throw std::invalid_argument("label_noise must lie in [0, 1)");
  }
  Rng rng(seed);
  std::vector<LabeledSample> samples;
  samples.reserve(static_cast<size_t>(2 * per_class));
  for (int c = 1; c <= 2; ++c) {
    const double center = (c == 1 ? -0.5 : 0.5) * separation;
    for (int i = 0; i < per_class; ++i) {
      Eigen::VectorXd x(2);
      x << center + rng.normal(), rng.normal();
      int label = c;
      if (rng.uniform_unit() <= label_noise) label = 3 - c;
      samples.push_back({std::move(x), label});
    }
  }
  return make_dataset(std::move(samples), 2);
}

}  // namespace drknn
