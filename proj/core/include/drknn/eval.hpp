#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drknn/classify.hpp"
#include "drknn/dataset.hpp"
#include "drknn/lfd.hpp"

namespace drknn {

enum class ClassifierKind {
  drknn,            // least-favorable weighted k-NN
  truncated_drknn,  // same, voting over the entropy-truncated support
  vanilla,          // unweighted k-NN
  inverse_distance,
  kernel,
  uniform_random,   // guesses a class uniformly; the chance baseline
};

std::string to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(const std::string& name);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::drknn;
  int k = 1;
  RadiusVector radii;            // per-class budgets; empty -> see below
  double shared_radius = -1.0;   // >= 0 replicates one budget across classes
  std::vector<double> cv_grid;   // candidate shared budgets; nonempty -> cross-validate
  int cv_folds = 5;
  double bandwidth = 1.0;        // kernel kind only
  double tau = 0.9;              // truncated kind only
  std::uint64_t seed = 0;        // uniform_random kind only
};

/// How an episode is drawn from a pool: `classes` distinct pool classes,
/// `shots` training samples each, and `query_count` held-out queries.
struct EpisodeSpec {
  int classes = 2;
  int shots = 5;
  int query_count = 20;
  std::uint64_t seed = 0;
};

/// One sampled episode. Training and query labels are relabeled 1..classes;
/// class_map[new_label - 1] recovers the pool label.
struct Episode {
  Dataset train;
  Dataset queries;
  std::vector<int> class_map;
};

/// Draws an episode deterministically from spec.seed: picks classes, then
/// disjoint train and query samples per class. Queries are split evenly
/// across classes, leftovers going to the lowest new labels. Throws when a
/// pool class is too small, naming its pool label.
Episode sample_episode(const Dataset& pool, const EpisodeSpec& spec);

/// Outcome of classifying one query set with one configuration.
struct EvalResult {
  double accuracy = 0.0;
  int correct = 0;
  int total = 0;
  std::vector<int> predicted;    // 1-based labels, one per query
  std::vector<VoteVector> votes; // per-query vote masses behind each label
  double chosen_radius = -1.0;   // shared budget picked by cross-validation
  double kept_fraction = -1.0;   // truncated kind: surviving support share
};

/// Classifies every query against the training set. Least-favorable kinds
/// solve for the LFDs once; with an empty radius configuration and a
/// nonempty cv_grid the shared budget is cross-validated first.
EvalResult evaluate(const Dataset& train, const Dataset& queries,
                    const ClassifierConfig& config);

/// Picks the best shared budget for least-favorable k-NN from `grid` by
/// stratified k-fold cross-validation. Folds are dealt round-robin within
/// each class; every class needs at least 2 samples. Ties prefer the
/// smaller budget.
struct CvChoice {
  double radius = 0.0;
  double accuracy = 0.0;
  std::vector<double> grid_accuracy;  // aligned with the ascending grid
  std::vector<double> grid;           // the grid, sorted ascending
};
CvChoice cross_validate_radius(const Dataset& train, int k, const std::vector<double>& grid,
                               int folds);

/// Accuracy across independently sampled episodes.
struct EvalReport {
  std::vector<double> accuracies;      // by episode ordinal
  std::vector<double> chosen_radii;    // -1 where no cross-validation ran
  std::vector<double> kept_fractions;  // -1 for non-truncated kinds
  double mean_accuracy = 0.0;
  double stddev = 0.0;  // sample standard deviation across episodes
  int episodes = 0;
};

/// Runs `episodes` episodes; episode e uses seed derive_stream(spec.seed, e)
/// so reruns and parameter sweeps see identical data. jobs > 1 distributes
/// episodes across threads; results are merged by ordinal, so the report
/// does not depend on scheduling.
EvalReport run_episodes(const Dataset& pool, const EpisodeSpec& spec, int episodes,
                        const ClassifierConfig& config, int jobs = 1);

/// One classifier parameter varied over a value list, all other settings
/// and all episode seeds held fixed. parameter is one of "k", "bandwidth",
/// "tau", "radius".
struct SweepReport {
  std::string parameter;
  std::vector<double> values;
  std::vector<EvalReport> reports;  // aligned with values
};
SweepReport sweep(const Dataset& pool, const EpisodeSpec& spec, int episodes,
                  const ClassifierConfig& base, const std::string& parameter,
                  const std::vector<double>& values, int jobs = 1);

/// Two isotropic Gaussian classes in the plane, centers separated along the
/// first axis, with a `label_noise` chance of flipping each label.
Dataset make_two_gaussians(int per_class, double separation, double label_noise,
                           std::uint64_t seed);

}  // namespace drknn
