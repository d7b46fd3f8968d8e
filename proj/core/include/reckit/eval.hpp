#ifndef RECKIT_EVAL_HPP_
#define RECKIT_EVAL_HPP_

#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "reckit/corpus.hpp"

namespace reckit::eval {

double mae(std::span<const double> pred, std::span<const double> truth);

struct RankingMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mrr = 0.0;
  double ndcg = 0.0;
  bool empty_relevant = false;  // all metrics forced to 0
};

/// Binary-relevance metrics at the cutoff; nDCG uses a log2 discount and
/// ideal-DCG normalization.
RankingMetrics ranking_metrics(const std::vector<std::string>& recs,
                               const std::set<std::string>& relevant, std::size_t cutoff);

/// Probability mass per genre; masses sum to 1 (an item with g genres
/// contributes 1/g to each of its genres).
using GenreDistribution = std::map<std::string, double>;

GenreDistribution genre_distribution(const std::vector<std::string>& items,
                                     const std::map<std::string, corpus::ItemMeta>& meta);

/// KL(p || q~) with q~ = (1-beta) q + beta p and natural log. beta = 0
/// disables smoothing (test hook) and then requires q > 0 wherever p > 0.
double kl_miscalibration(const GenreDistribution& p, const GenreDistribution& q,
                         double beta = 0.01);

/// Group average popularity: mean over users of the mean popularity of their
/// items.
double gap(const std::vector<std::string>& group_users,
           const std::map<std::string, std::vector<std::string>>& items_per_user,
           const std::map<std::string, double>& popularity);

/// (GAP_q - GAP_p) / GAP_p.
double popularity_lift(double gap_profiles, double gap_recommendations);

/// Pearson correlation between item popularity and recommendation frequency.
double popularity_reco_correlation(const std::map<std::string, double>& reco_frequency,
                                   const std::map<std::string, double>& popularity);

struct ShapeStats {
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess
};

/// Sample (biased) moment estimators by default; bias-corrected on request.
ShapeStats distribution_shape(std::span<const double> values, bool bias_corrected = false);

/// Mean over recommended items of -ln(popularity), popularity floored at
/// 1/n_users.
double system_novelty(const std::vector<std::string>& recs,
                      const std::map<std::string, double>& popularity,
                      std::size_t n_users);

struct GroupStat {
  double mean = 0.0;
  std::size_t count = 0;
};

struct MetricReport {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  // metric -> group ("overall" included) -> stat
  std::map<std::string, std::map<std::string, GroupStat>> values;
  std::vector<std::string> warnings;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

/// Per-group means (empty groups omitted with a warning) plus the overall
/// mean, for one named metric.
void group_report(MetricReport& report, const std::string& metric,
                  const corpus::UserGroupAssignment& assignment,
                  const std::map<std::string, double>& per_user_values);

}  // namespace reckit::eval

#endif  // RECKIT_EVAL_HPP_
