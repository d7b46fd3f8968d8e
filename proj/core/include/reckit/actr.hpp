#ifndef RECKIT_ACTR_HPP_
#define RECKIT_ACTR_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reckit/corpus.hpp"
#include "reckit/neighbors.hpp"

namespace reckit::actr {

enum class UnitKind { Genre, Track };

/// Component order used throughout: base-level (BLL), spreading activation
/// (S), valuation (V), social (SC).
using ComponentWeights = std::array<double, 4>;

inline constexpr ComponentWeights kWeightsUniform = {0.25, 0.25, 0.25, 0.25};
inline constexpr ComponentWeights kWeightsBllOnly = {1.0, 0.0, 0.0, 0.0};
/// Base-level plus spreading activation only (the full activation equation).
inline constexpr ComponentWeights kWeightsActivation = {0.5, 0.5, 0.0, 0.0};

struct ActrConfig {
  double decay = 1.0;               // d > 0
  double time_unit_seconds = 3600;  // one recency unit
  double t_floor = 1.0;             // minimum elapsed time, in units
  ComponentWeights weights = kWeightsUniform;
  std::size_t social_k = 10;
};

struct AttributionRow {
  std::string unit;
  std::array<double, 4> share;  // (bll, s, v, sc), sums to 1
  bool flagged_uniform = false; // all-zero row replaced by 0.25 each
};

struct AttributionMatrix {
  std::vector<AttributionRow> rows;
};

struct RankedUnit {
  std::string unit;
  double score = 0.0;
};

/// Memory model over a training log: per-(user, unit) occurrence histories,
/// genre co-occurrence statistics for the spreading activation, and an
/// implicit-count KNN for the social component. Immutable after training.
class ActrModel {
 public:
  static ActrModel train(const corpus::InteractionLog& log, UnitKind kind,
                         ActrConfig cfg);

  const ActrConfig& config() const { return cfg_; }
  UnitKind unit_kind() const { return kind_; }
  std::vector<std::string> units() const;

  /// B = ln(sum_j t_j^-d) over occurrences strictly before `now`;
  /// t_j = max((now - ts_j) / time_unit, t_floor). Absent without occurrences.
  std::optional<double> bll_score(const std::string& user, const std::string& unit,
                                  double now) const;

  /// sum_j W_j * S_{j,unit} with W_j = 1/|context| and
  /// S_{j,i} = ln(1 + cooc(j,i)/occ(j)). Empty context gives 0.
  double associative_activation(const std::string& unit,
                                const std::vector<std::string>& context) const;

  /// bll_score + associative_activation; absent when BLL is absent.
  std::optional<double> activation_score(const std::string& user, const std::string& unit,
                                         const std::vector<std::string>& context,
                                         double now) const;

  /// ln(1 + n) for n occurrences of (user, unit).
  double valuation_score(const std::string& user, const std::string& unit) const;

  /// User-based CF score over implicit unit counts.
  std::optional<double> social_score(const std::string& user,
                                     const std::string& unit) const;

  /// Genres of the artist the user listened to most recently (falls back to
  /// the latest item's genres when no artist is known).
  std::vector<std::string> default_context(const std::string& user) const;

  /// Per-component scores min-max normalized over the candidate set, combined
  /// with the weights; ties break by unit id.
  std::vector<RankedUnit> rank_units(const std::string& user,
                                     const std::vector<std::string>& candidates,
                                     const std::vector<std::string>& context, double now,
                                     const ComponentWeights& weights) const;

  std::vector<RankedUnit> rank_units(const std::string& user,
                                     const std::vector<std::string>& candidates,
                                     const std::vector<std::string>& context,
                                     double now) const {
    return rank_units(user, candidates, context, now, cfg_.weights);
  }

  /// Relative contribution of (BLL, S, V, SC) to each recommended unit's
  /// score; rows sum to 1. All-zero rows become uniform 0.25 and are flagged.
  AttributionMatrix attribute_components(const std::string& user,
                                         const std::vector<std::string>& recs,
                                         const std::vector<std::string>& context,
                                         double now) const;

  std::size_t occurrence_count(const std::string& user, const std::string& unit) const;

 private:
  ActrConfig cfg_;
  UnitKind kind_ = UnitKind::Genre;
  std::map<std::pair<std::string, std::string>, std::vector<double>> histories_;
  std::map<std::string, std::size_t> context_occ_;                         // occ(j)
  std::map<std::pair<std::string, std::string>, std::size_t> context_cooc_; // cooc(j,i)
  std::map<std::string, std::pair<double, std::string>> latest_event_;  // user -> (ts, item)
  std::map<std::string, std::set<std::string>> artist_genres_;
  std::map<std::string, corpus::ItemMeta> item_meta_;
  neighbors::RatingMatrix social_matrix_;
  std::optional<neighbors::UserKnn> social_knn_;
};

/// Fits the decay exponent from re-consumption gaps: gaps are histogrammed in
/// logarithmic time bins, bin counts are normalized by bin width, and a least
/// squares line on log-log axes gives d = -slope. Throws when fewer than 3
/// bins are populated.
double fit_decay_from_gaps(const std::vector<double>& gaps_in_units,
                           std::size_t n_bins = 24);

/// Extracts per-(user, unit) re-consumption gaps from the log and fits d.
double fit_decay_exponent(const corpus::InteractionLog& log, UnitKind kind,
                          double time_unit_seconds = 3600);

void write_attribution_csv(std::ostream& out, const std::string& user,
                           const AttributionMatrix& matrix);

}  // namespace reckit::actr

#endif  // RECKIT_ACTR_HPP_
