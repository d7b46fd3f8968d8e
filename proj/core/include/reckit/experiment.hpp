#ifndef RECKIT_EXPERIMENT_HPP_
#define RECKIT_EXPERIMENT_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reckit/corpus.hpp"
#include "reckit/fairsim.hpp"

namespace reckit::experiment {

/// Invalid or missing configuration; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string interactions;
  std::optional<std::string> item_meta;
  std::optional<std::string> trust_edges;
  std::string algorithm;  // userknn, itemknn, mostpop, reuseknn_dp, bll, act, trust_knn
  std::uint64_t seed = 0;
  std::size_t k = 10;
  std::size_t top_n = 10;
  double train_fraction = 0.8;
  std::uint64_t tau = 0;  // 0 means "not set" -> infinity
  std::size_t dp_levels = 5;
  std::optional<double> decay;  // absent -> fit from the training log
  std::array<double, 4> weights = {0.25, 0.25, 0.25, 0.25};
  double alpha = 0.1;
  int max_hops = 6;
  corpus::GroupScheme group_scheme = corpus::GroupScheme::TercilePopularity;
  corpus::RatingRange rating_range;
  double relevance_threshold = 0.0;  // <= rating_range.min means "all test items"
  std::string out = ".";
  std::string config_path;  // set by load_experiment_config, hashed in the manifest
};

/// Reads and validates a JSON experiment config. Unknown algorithm ids and
/// missing required fields raise ConfigError naming the field.
ExperimentConfig load_experiment_config(const std::string& path);

/// Trains the configured algorithm on a chronological split, evaluates it, and
/// writes report.csv, report.json, and manifest.json to the output directory
/// (plus attribution.csv for act/bll and ledger.csv for reuseknn_dp). Outputs
/// are deterministic for a fixed seed. Returns the written file paths.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg);

struct SimulateConfig {
  fairsim::SimConfig sim;
  fairsim::LogisticHyper hyper;
  std::string out = ".";
  std::string config_path;
};

SimulateConfig load_simulate_config(const std::string& path);

/// One trajectory CSV per seed (trajectory_<seed>.csv) plus a manifest.
std::vector<std::string> simulate_fairness(const SimulateConfig& cfg,
                                           const std::vector<std::uint64_t>& seeds);

/// FNV-1a over a file's bytes, for the output manifest.
std::uint64_t file_hash(const std::string& path);

void write_manifest(const std::string& out_dir, const std::string& config_path,
                    std::uint64_t seed, const std::vector<std::string>& outputs);

}  // namespace reckit::experiment

#endif  // RECKIT_EXPERIMENT_HPP_
