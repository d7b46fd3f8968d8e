#ifndef RECKIT_FAIRSIM_HPP_
#define RECKIT_FAIRSIM_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "reckit/rng.hpp"

namespace reckit::fairsim {

enum class ClassifierVariant { Unbiased, Biased };

/// Which predicted class receives the skill boost; the other class decays.
enum class HelpTarget { LowProspects, HighProspects };

struct Agent {
  std::size_t id = 0;
  std::vector<double> skills;  // each in [0, 1]
  int protected_attr = 0;      // A: 1 = protected group
  int true_label = 0;          // Y: 1 iff mean skill >= hire threshold
  int predicted_label = 0;     // Y-hat
  int employed = 0;
};

using AgentPool = std::vector<Agent>;

struct SimConfig {
  std::size_t n_agents = 400;
  std::size_t skill_dim = 2;
  double privileged_mean = 0.55;  // A = 0
  double protected_mean = 0.45;   // A = 1; must not exceed privileged_mean
  double protected_share = 0.5;
  double noise_sd = 0.15;
  std::size_t iterations = 30;
  double help_boost = 0.02;
  double decay = 0.02;
  ClassifierVariant variant = ClassifierVariant::Unbiased;
  HelpTarget help_target = HelpTarget::LowProspects;
  double hire_threshold = 0.5;
  std::uint64_t seed = 0;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  double probability(const std::vector<double>& features) const;
};

struct LogisticHyper {
  double learning_rate = 0.1;
  std::size_t max_epochs = 5000;
  double tolerance = 1e-6;  // on the gradient norm
};

/// Skills drawn per dimension from Normal(group_mean, noise_sd) and clipped
/// to [0, 1]; the first floor(protected_share * n) agents are protected.
AgentPool init_population(const SimConfig& cfg, Rng& rng);

/// Classifier input: the skill vector, plus the protected attribute when the
/// variant is Biased.
std::vector<double> agent_features(const Agent& agent, ClassifierVariant variant);

/// Full-batch gradient descent on mean log-loss. Throws when only one class
/// is present.
LogisticModel fit_logistic(const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels,
                           const LogisticHyper& hyper = {});

/// Sets each agent's predicted label to 1 iff the model probability >= 0.5.
void classify(const LogisticModel& model, AgentPool& agents, ClassifierVariant variant);

/// Helped agents (predicted class per cfg.help_target) gain help_boost on
/// every skill; the others lose decay. Skills clip to [0, 1], true labels are
/// recomputed, employment is resampled with probability sigmoid(mean skill).
void step(AgentPool& agents, const SimConfig& cfg, Rng& rng);

struct ParityStats {
  double rate_privileged = 0.0;  // P(label = 1 | A = 0)
  double rate_protected = 0.0;   // P(label = 1 | A = 1)
  double difference = 0.0;       // |rate_privileged - rate_protected|
  double ratio = 1.0;            // protected / privileged
};

ParityStats statistical_parity(const std::vector<int>& labels,
                               const std::vector<int>& attrs);

bool four_fifths_check(double ratio);

struct OpportunityStats {
  double tpr_privileged = 0.0;
  double tpr_protected = 0.0;
  double difference = 0.0;
  bool privileged_defined = true;  // false when the group has no positives
  bool protected_defined = true;
};

OpportunityStats equality_of_opportunity(const std::vector<int>& predictions,
                                         const std::vector<int>& truths,
                                         const std::vector<int>& attrs);

struct IterationStats {
  std::size_t iteration = 0;
  ParityStats predicted_parity;   // on predicted labels
  ParityStats base_rate_parity;   // on true labels ("in the dataset")
  OpportunityStats opportunity;
  std::size_t misclassified_privileged = 0;
  std::size_t misclassified_protected = 0;
  double mean_skill_privileged = 0.0;
  double mean_skill_protected = 0.0;
};

struct SimTrajectory {
  SimConfig config;
  std::vector<IterationStats> iterations;
};

/// fit -> classify -> metrics -> step, refitting each iteration; one
/// deterministic single-threaded run per seed.
SimTrajectory run_simulation(const SimConfig& cfg, const LogisticHyper& hyper = {});

/// CSV `iteration,metric,group,value`.
void write_trajectory_csv(std::ostream& out, const SimTrajectory& trajectory);

}  // namespace reckit::fairsim

#endif  // RECKIT_FAIRSIM_HPP_
