#ifndef RECKIT_TRUST_HPP_
#define RECKIT_TRUST_HPP_

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reckit/neighbors.hpp"

namespace reckit::trust {

/// Directed 0/1 trust edges over user nodes; no self-loops. By default edges
/// are folded to an undirected adjacency before similarity computation.
class TrustGraph {
 public:
  static TrustGraph from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                               double alpha, int max_hops = 6,
                               bool fold_undirected = true);

  /// Trust edges CSV `truster,trustee`.
  static TrustGraph from_csv(const std::string& path, double alpha, int max_hops = 6,
                             bool fold_undirected = true);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  double alpha() const { return alpha_; }
  int max_hops() const { return max_hops_; }
  std::optional<std::size_t> node_index(const std::string& id) const;

 private:
  std::vector<std::string> nodes_;
  Eigen::MatrixXd adjacency_;
  double alpha_ = 0.1;
  int max_hops_ = 6;
};

/// Largest absolute eigenvalue, via power iteration on |A|.
double spectral_radius(const Eigen::MatrixXd& a);

/// Truncated Katz similarity S = sum_{h=1..K} alpha^h A^h.
Eigen::MatrixXd katz_similarity(const TrustGraph& g);

/// Closed form S = (I - alpha A)^-1 - I; requires alpha * lambda_max < 1.
Eigen::MatrixXd katz_similarity_closed(const TrustGraph& g);

/// Top-k raters of the item by Katz similarity to the target user, then the
/// similarity-weighted mean of their ratings.
std::optional<double> trust_knn_predict(const std::string& user, const std::string& item,
                                        std::size_t k, const TrustGraph& g,
                                        const Eigen::MatrixXd& sim,
                                        const neighbors::RatingMatrix& train);

}  // namespace reckit::trust

#endif  // RECKIT_TRUST_HPP_
