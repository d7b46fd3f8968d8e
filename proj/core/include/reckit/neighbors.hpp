#ifndef RECKIT_NEIGHBORS_HPP_
#define RECKIT_NEIGHBORS_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "reckit/corpus.hpp"

namespace reckit::neighbors {

enum class SimilarityMetric { Cosine, Pearson };

struct SimilarityConfig {
  SimilarityMetric metric = SimilarityMetric::Cosine;
  std::size_t min_overlap = 1;

  static SimilarityConfig cosine(std::size_t min_overlap = 1) {
    return {SimilarityMetric::Cosine, min_overlap};
  }
  static SimilarityConfig pearson(std::size_t min_overlap = 2) {
    return {SimilarityMetric::Pearson, min_overlap};
  }
};

/// Sparse profile: (index, value) pairs sorted by index.
using Profile = std::vector<std::pair<std::size_t, double>>;

struct Neighbor {
  std::string id;
  double similarity = 0.0;
};

/// Ranked neighbor set for a (user, item) query. Similarities are strictly
/// positive and non-increasing; every member rated the query item.
struct Neighborhood {
  std::string user;
  std::string item;
  std::vector<Neighbor> members;

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
};

/// Latest rating per (user, item), indexed both ways. For implicit feedback
/// the value is the interaction count instead.
class RatingMatrix {
 public:
  static RatingMatrix from_log(const corpus::InteractionLog& log,
                               bool implicit_counts = false);

  /// Builds from explicit (user, item, value) cells; later duplicates win.
  static RatingMatrix from_cells(
      const std::vector<std::tuple<std::string, std::string, double>>& cells);

  RatingMatrix transposed() const;

  std::size_t n_users() const { return user_ids_.size(); }
  std::size_t n_items() const { return item_ids_.size(); }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }
  std::optional<std::size_t> user_index(const std::string& id) const;
  std::optional<std::size_t> item_index(const std::string& id) const;

  const Profile& user_profile(std::size_t u) const { return profiles_[u]; }
  /// (user index, rating) pairs of users who rated the item, sorted by user.
  const Profile& item_raters(std::size_t i) const { return raters_[i]; }
  double user_norm(std::size_t u) const { return norms_[u]; }

  std::optional<double> rating(std::size_t u, std::size_t i) const;
  std::optional<double> item_mean(std::size_t i) const;
  double global_mean() const;

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::map<std::string, std::size_t> user_index_;
  std::map<std::string, std::size_t> item_index_;
  std::vector<Profile> profiles_;  // per user
  std::vector<Profile> raters_;    // per item
  std::vector<double> norms_;      // per user
};

/// Similarity of two sparse profiles. Cosine uses full-profile norms; Pearson
/// centers on co-rated entries only. Fewer co-rated entries than min_overlap,
/// or undefined variance, yield 0.
double similarity(const Profile& a, const Profile& b, const SimilarityConfig& cfg);

/// sum(sim_i * r_i) / sum(sim_i); weights must be positive.
double weighted_mean(std::span<const double> sims, std::span<const double> ratings);

/// User-based KNN over an immutable training matrix. Scoring is pure and may
/// run concurrently; the pairwise similarity cache is precomputed at build.
class UserKnn {
 public:
  UserKnn(RatingMatrix train, SimilarityConfig cfg);

  const RatingMatrix& matrix() const { return matrix_; }
  const SimilarityConfig& config() const { return cfg_; }

  double similarity(std::size_t u, std::size_t v) const;

  /// Argmax-k over users who rated the item, by similarity to `user`;
  /// non-positive similarities excluded; ties break by neighbor id.
  Neighborhood top_k_neighbors(const std::string& user, const std::string& item,
                               std::size_t k) const;

  /// Similarity-weighted mean of the members' latest ratings of the item.
  std::optional<double> predict_rating(const Neighborhood& hood) const;

  std::optional<double> predict(const std::string& user, const std::string& item,
                                std::size_t k) const;

 private:
  RatingMatrix matrix_;
  SimilarityConfig cfg_;
  std::vector<double> sim_;  // dense symmetric cache
};

/// Item-based KNN: item-item similarity over co-rating users, prediction from
/// the target user's own ratings of the most similar items.
class ItemKnn {
 public:
  ItemKnn(const RatingMatrix& train, SimilarityConfig cfg);

  std::optional<double> predict(const std::string& user, const std::string& item,
                                std::size_t k) const;

 private:
  UserKnn inner_;  // over the transposed matrix
  RatingMatrix forward_;
};

using Scorer =
    std::function<std::optional<double>(const std::string& user, const std::string& item)>;

/// The n highest-scoring items the user has not interacted with; unscoreable
/// items are skipped; ties break by item id.
std::vector<std::string> recommend_top_n(const RatingMatrix& train,
                                         const std::string& user, std::size_t n,
                                         const Scorer& scorer);

/// Items by popularity descending, id tie-break.
std::vector<std::string> most_popular(const corpus::InteractionLog& log, std::size_t n);

enum class Fallback { None, ItemMean, GlobalMean };

/// predict() with the configured substitute when the neighborhood is empty:
/// item mean first, then global mean.
std::optional<double> predict_with_fallback(const UserKnn& knn, const std::string& user,
                                            const std::string& item, std::size_t k,
                                            Fallback fallback);

}  // namespace reckit::neighbors

#endif  // RECKIT_NEIGHBORS_HPP_
