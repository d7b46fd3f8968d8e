#include "reckit/fairsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace reckit::fairsim {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double mean_skill(const Agent& a) {
  return std::accumulate(a.skills.begin(), a.skills.end(), 0.0) /
         static_cast<double>(a.skills.size());
}

void validate(const SimConfig& cfg) {
  if (cfg.n_agents < 2) throw std::invalid_argument("need at least 2 agents");
  if (cfg.skill_dim == 0) throw std::invalid_argument("skill_dim must be >= 1");
  if (cfg.iterations == 0) throw std::invalid_argument("iterations must be >= 1");
  if (cfg.help_boost < 0.0 || cfg.decay < 0.0)
    throw std::invalid_argument("help_boost and decay must be non-negative");
  if (cfg.protected_share <= 0.0 || cfg.protected_share >= 1.0)
    throw std::invalid_argument("protected_share must be in (0, 1)");
  if (cfg.protected_mean > cfg.privileged_mean)
    throw std::invalid_argument("protected group mean must not exceed the privileged mean");
}

}  // namespace

double LogisticModel::probability(const std::vector<double>& features) const {
  if (features.size() != weights.size())
    throw std::invalid_argument("feature dimension mismatch");
  double z = bias;
  for (std::size_t i = 0; i < features.size(); ++i) z += weights[i] * features[i];
  return sigmoid(z);
}

AgentPool init_population(const SimConfig& cfg, Rng& rng) {
  validate(cfg);
  const auto n_protected =
      static_cast<std::size_t>(cfg.protected_share * static_cast<double>(cfg.n_agents));
  AgentPool pool(cfg.n_agents);
  for (std::size_t i = 0; i < cfg.n_agents; ++i) {
    Agent& a = pool[i];
    a.id = i;
    a.protected_attr = i < n_protected ? 1 : 0;
    const double mean = a.protected_attr ? cfg.protected_mean : cfg.privileged_mean;
    a.skills.resize(cfg.skill_dim);
    for (auto& s : a.skills)
      s = std::clamp(rng.gaussian(mean, cfg.noise_sd), 0.0, 1.0);
    a.true_label = mean_skill(a) >= cfg.hire_threshold ? 1 : 0;
    a.employed = a.true_label;
  }
  return pool;
}

std::vector<double> agent_features(const Agent& agent, ClassifierVariant variant) {
  std::vector<double> f = agent.skills;
  if (variant == ClassifierVariant::Biased)
    f.push_back(static_cast<double>(agent.protected_attr));
  return f;
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels,
                           const LogisticHyper& hyper) {
  if (features.size() != labels.size())
    throw std::invalid_argument("feature/label length mismatch");
  if (features.empty()) throw std::invalid_argument("empty training set");
  const bool any_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool any_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!any_pos || !any_neg)
    throw std::invalid_argument("logistic fit needs both classes present");

  const std::size_t n = features.size();
  const std::size_t dim = features[0].size();
  LogisticModel model;
  model.weights.assign(dim, 0.0);

  std::vector<double> grad(dim);
  for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double err = model.probability(features[i]) - static_cast<double>(labels[i]);
      for (std::size_t d = 0; d < dim; ++d) grad[d] += err * features[i][d];
      grad_bias += err;
    }
    double norm2 = grad_bias * grad_bias;
    for (std::size_t d = 0; d < dim; ++d) norm2 += grad[d] * grad[d];
    const double scale = hyper.learning_rate / static_cast<double>(n);
    for (std::size_t d = 0; d < dim; ++d) model.weights[d] -= scale * grad[d];
    model.bias -= scale * grad_bias;
    if (std::sqrt(norm2) / static_cast<double>(n) < hyper.tolerance) break;
  }
  return model;
}

void classify(const LogisticModel& model, AgentPool& agents, ClassifierVariant variant) {
  for (auto& a : agents)
    a.predicted_label = model.probability(agent_features(a, variant)) >= 0.5 ? 1 : 0;
}

void step(AgentPool& agents, const SimConfig& cfg, Rng& rng) {
  const int helped_class = cfg.help_target == HelpTarget::HighProspects ? 1 : 0;
  for (auto& a : agents) {
    const double delta =
        a.predicted_label == helped_class ? cfg.help_boost : -cfg.decay;
    for (auto& s : a.skills) s = std::clamp(s + delta, 0.0, 1.0);
    a.true_label = mean_skill(a) >= cfg.hire_threshold ? 1 : 0;
    a.employed = rng.bernoulli(sigmoid(mean_skill(a))) ? 1 : 0;
  }
}

ParityStats statistical_parity(const std::vector<int>& labels,
                               const std::vector<int>& attrs) {
  if (labels.size() != attrs.size())
    throw std::invalid_argument("label/attribute length mismatch");
  std::size_t n0 = 0, n1 = 0, pos0 = 0, pos1 = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (attrs[i]) {
      ++n1;
      pos1 += labels[i] != 0;
    } else {
      ++n0;
      pos0 += labels[i] != 0;
    }
  }
  if (n0 == 0 || n1 == 0) throw std::invalid_argument("both groups must be present");
  ParityStats p;
  p.rate_privileged = static_cast<double>(pos0) / static_cast<double>(n0);
  p.rate_protected = static_cast<double>(pos1) / static_cast<double>(n1);
  p.difference = std::abs(p.rate_privileged - p.rate_protected);
  if (p.rate_privileged > 0.0)
    p.ratio = p.rate_protected / p.rate_privileged;
  else
    p.ratio = p.rate_protected == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return p;
}

bool four_fifths_check(double ratio) { return ratio >= 0.8; }

OpportunityStats equality_of_opportunity(const std::vector<int>& predictions,
                                         const std::vector<int>& truths,
                                         const std::vector<int>& attrs) {
  if (predictions.size() != truths.size() || truths.size() != attrs.size())
    throw std::invalid_argument("length mismatch");
  std::size_t qual0 = 0, qual1 = 0, tp0 = 0, tp1 = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (!truths[i]) continue;
    if (attrs[i]) {
      ++qual1;
      tp1 += predictions[i] != 0;
    } else {
      ++qual0;
      tp0 += predictions[i] != 0;
    }
  }
  OpportunityStats o;
  o.privileged_defined = qual0 > 0;
  o.protected_defined = qual1 > 0;
  if (o.privileged_defined)
    o.tpr_privileged = static_cast<double>(tp0) / static_cast<double>(qual0);
  if (o.protected_defined)
    o.tpr_protected = static_cast<double>(tp1) / static_cast<double>(qual1);
  if (o.privileged_defined && o.protected_defined)
    o.difference = std::abs(o.tpr_privileged - o.tpr_protected);
  return o;
}

SimTrajectory run_simulation(const SimConfig& cfg, const LogisticHyper& hyper) {
  validate(cfg);
  Rng rng(cfg.seed);
  AgentPool pool = init_population(cfg, rng);

  SimTrajectory traj;
  traj.config = cfg;
  traj.iterations.reserve(cfg.iterations);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    std::vector<std::vector<double>> features;
    std::vector<int> truths, attrs;
    features.reserve(pool.size());
    for (const auto& a : pool) {
      features.push_back(agent_features(a, cfg.variant));
      truths.push_back(a.true_label);
      attrs.push_back(a.protected_attr);
    }
    const LogisticModel model = fit_logistic(features, truths, hyper);
    classify(model, pool, cfg.variant);

    std::vector<int> predictions;
    predictions.reserve(pool.size());
    for (const auto& a : pool) predictions.push_back(a.predicted_label);

    IterationStats s;
    s.iteration = it;
    s.predicted_parity = statistical_parity(predictions, attrs);
    s.base_rate_parity = statistical_parity(truths, attrs);
    s.opportunity = equality_of_opportunity(predictions, truths, attrs);
    double skill0 = 0.0, skill1 = 0.0;
    std::size_t n0 = 0, n1 = 0;
    for (const auto& a : pool) {
      if (a.predicted_label != a.true_label) {
        if (a.protected_attr)
          ++s.misclassified_protected;
        else
          ++s.misclassified_privileged;
      }
      if (a.protected_attr) {
        skill1 += mean_skill(a);
        ++n1;
      } else {
        skill0 += mean_skill(a);
        ++n0;
      }
    }
    s.mean_skill_privileged = skill0 / static_cast<double>(n0);
    s.mean_skill_protected = skill1 / static_cast<double>(n1);
    traj.iterations.push_back(s);

    step(pool, cfg, rng);
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const SimTrajectory& trajectory) {
  out << "iteration,metric,group,value\n";
  for (const auto& s : trajectory.iterations) {
    const auto row = [&](const char* metric, const char* group, double value) {
      out << s.iteration << ',' << metric << ',' << group << ',' << value << '\n';
    };
    row("positive_rate_predicted", "privileged", s.predicted_parity.rate_privileged);
    row("positive_rate_predicted", "protected", s.predicted_parity.rate_protected);
    row("parity_difference_predicted", "all", s.predicted_parity.difference);
    row("parity_ratio_predicted", "all", s.predicted_parity.ratio);
    row("positive_rate_true", "privileged", s.base_rate_parity.rate_privileged);
    row("positive_rate_true", "protected", s.base_rate_parity.rate_protected);
    row("parity_difference_true", "all", s.base_rate_parity.difference);
    if (s.opportunity.privileged_defined)
      row("tpr", "privileged", s.opportunity.tpr_privileged);
    if (s.opportunity.protected_defined)
      row("tpr", "protected", s.opportunity.tpr_protected);
    if (s.opportunity.privileged_defined && s.opportunity.protected_defined)
      row("opportunity_difference", "all", s.opportunity.difference);
    row("misclassified", "privileged",
        static_cast<double>(s.misclassified_privileged));
    row("misclassified", "protected",
        static_cast<double>(s.misclassified_protected));
    row("mean_skill", "privileged", s.mean_skill_privileged);
    row("mean_skill", "protected", s.mean_skill_protected);
  }
}

}  // namespace reckit::fairsim
