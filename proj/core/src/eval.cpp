#include "reckit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reckit::eval {

double mae(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("prediction/truth length mismatch");
  if (pred.empty()) throw std::invalid_argument("empty prediction set");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - truth[i]);
  return sum / static_cast<double>(pred.size());
}

RankingMetrics ranking_metrics(const std::vector<std::string>& recs,
                               const std::set<std::string>& relevant,
                               std::size_t cutoff) {
  RankingMetrics m;
  if (relevant.empty()) {
    m.empty_relevant = true;
    return m;
  }
  if (cutoff == 0) throw std::invalid_argument("cutoff must be >= 1");
  const std::size_t n = std::min(cutoff, recs.size());

  std::size_t hits = 0;
  double dcg = 0.0;
  bool first_hit = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!relevant.contains(recs[i])) continue;
    ++hits;
    dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    if (!first_hit) {
      m.mrr = 1.0 / static_cast<double>(i + 1);
      first_hit = true;
    }
  }
  m.precision = static_cast<double>(hits) / static_cast<double>(cutoff);
  m.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  if (m.precision + m.recall > 0.0)
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);

  double idcg = 0.0;
  const std::size_t ideal = std::min(cutoff, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i)
    idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  if (idcg > 0.0) m.ndcg = dcg / idcg;
  return m;
}

GenreDistribution genre_distribution(const std::vector<std::string>& items,
                                     const std::map<std::string, corpus::ItemMeta>& meta) {
  GenreDistribution dist;
  std::size_t counted = 0;
  for (const auto& item : items) {
    auto it = meta.find(item);
    if (it == meta.end() || it->second.genres.empty()) continue;
    ++counted;
    const double share = 1.0 / static_cast<double>(it->second.genres.size());
    for (const auto& g : it->second.genres) dist[g] += share;
  }
  if (counted == 0) return dist;
  for (auto& [g, mass] : dist) mass /= static_cast<double>(counted);
  return dist;
}

double kl_miscalibration(const GenreDistribution& p, const GenreDistribution& q,
                         double beta) {
  if (beta < 0.0 || beta >= 1.0)
    throw std::invalid_argument("beta must be in [0, 1)");
  double kl = 0.0;
  for (const auto& [g, pg] : p) {
    if (pg <= 0.0) continue;
    auto it = q.find(g);
    const double qg = it == q.end() ? 0.0 : it->second;
    const double qt = (1.0 - beta) * qg + beta * pg;
    if (qt <= 0.0)
      throw std::invalid_argument("unsmoothed target mass is zero for a profile genre");
    kl += pg * std::log(pg / qt);
  }
  return kl;
}

double gap(const std::vector<std::string>& group_users,
           const std::map<std::string, std::vector<std::string>>& items_per_user,
           const std::map<std::string, double>& popularity) {
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& u : group_users) {
    auto it = items_per_user.find(u);
    if (it == items_per_user.end() || it->second.empty()) continue;
    double user_sum = 0.0;
    for (const auto& item : it->second) {
      auto pop = popularity.find(item);
      user_sum += pop == popularity.end() ? 0.0 : pop->second;
    }
    total += user_sum / static_cast<double>(it->second.size());
    ++counted;
  }
  if (counted == 0) throw std::invalid_argument("no users with items in the group");
  return total / static_cast<double>(counted);
}

double popularity_lift(double gap_profiles, double gap_recommendations) {
  if (gap_profiles == 0.0)
    throw std::invalid_argument("profile GAP is zero; lift undefined");
  return (gap_recommendations - gap_profiles) / gap_profiles;
}

double popularity_reco_correlation(const std::map<std::string, double>& reco_frequency,
                                   const std::map<std::string, double>& popularity) {
  std::vector<double> xs, ys;
  for (const auto& [item, pop] : popularity) {
    auto it = reco_frequency.find(item);
    xs.push_back(pop);
    ys.push_back(it == reco_frequency.end() ? 0.0 : it->second);
  }
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 2) throw std::invalid_argument("need at least 2 items");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("zero variance; correlation undefined");
  return sxy / std::sqrt(sxx * syy);
}

ShapeStats distribution_shape(std::span<const double> values, bool bias_corrected) {
  const std::size_t n = values.size();
  if (n < 3) throw std::invalid_argument("need at least 3 values");
  const double dn = static_cast<double>(n);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (m2 == 0.0) throw std::invalid_argument("zero variance; shape undefined");

  ShapeStats s;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2) - 3.0;
  if (bias_corrected) {
    if (n < 4) throw std::invalid_argument("need at least 4 values for correction");
    s.skewness *= std::sqrt(dn * (dn - 1.0)) / (dn - 2.0);
    s.kurtosis = ((dn + 1.0) * s.kurtosis + 6.0) * (dn - 1.0) / ((dn - 2.0) * (dn - 3.0));
  }
  return s;
}

double system_novelty(const std::vector<std::string>& recs,
                      const std::map<std::string, double>& popularity,
                      std::size_t n_users) {
  if (recs.empty()) throw std::invalid_argument("empty recommendation list");
  if (n_users == 0) throw std::invalid_argument("n_users must be >= 1");
  const double floor = 1.0 / static_cast<double>(n_users);
  double sum = 0.0;
  for (const auto& item : recs) {
    auto it = popularity.find(item);
    const double pop = std::max(it == popularity.end() ? 0.0 : it->second, floor);
    sum += -std::log(pop);
  }
  return sum / static_cast<double>(recs.size());
}

void group_report(MetricReport& report, const std::string& metric,
                  const corpus::UserGroupAssignment& assignment,
                  const std::map<std::string, double>& per_user_values) {
  std::set<std::string> labels;
  for (const auto& [user, label] : assignment.groups) labels.insert(label);

  std::map<std::string, GroupStat> stats;
  GroupStat overall;
  for (const auto& [user, value] : per_user_values) {
    auto it = assignment.groups.find(user);
    if (it != assignment.groups.end()) {
      auto& g = stats[it->second];
      g.mean += value;
      ++g.count;
    }
    overall.mean += value;
    ++overall.count;
  }
  for (auto& [label, g] : stats) g.mean /= static_cast<double>(g.count);
  for (const auto& label : labels)
    if (!stats.contains(label))
      report.warnings.push_back("group '" + label + "' has no scored users for " + metric);
  if (overall.count > 0) overall.mean /= static_cast<double>(overall.count);
  stats["overall"] = overall;
  report.values[metric] = std::move(stats);
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void MetricReport::write_csv(std::ostream& out) const {
  out << "algorithm,group,metric,value,count\n";
  for (const auto& [metric, groups] : values)
    for (const auto& [group, stat] : groups)
      out << algorithm << ',' << group << ',' << metric << ',' << stat.mean << ','
          << stat.count << '\n';
}

void MetricReport::write_json(std::ostream& out) const {
  out << "{\n  \"algorithm\": \"" << json_escape(algorithm) << "\",\n"
      << "  \"seed\": " << seed << ",\n  \"k\": " << k << ",\n  \"metrics\": {";
  bool first_metric = true;
  for (const auto& [metric, groups] : values) {
    out << (first_metric ? "" : ",") << "\n    \"" << json_escape(metric) << "\": {";
    first_metric = false;
    bool first_group = true;
    for (const auto& [group, stat] : groups) {
      out << (first_group ? "" : ",") << "\n      \"" << json_escape(group)
          << "\": {\"mean\": " << stat.mean << ", \"count\": " << stat.count << "}";
      first_group = false;
    }
    out << "\n    }";
  }
  out << "\n  },\n  \"warnings\": [";
  for (std::size_t i = 0; i < warnings.size(); ++i)
    out << (i ? ", " : "") << '"' << json_escape(warnings[i]) << '"';
  out << "]\n}\n";
}

}  // namespace reckit::eval
