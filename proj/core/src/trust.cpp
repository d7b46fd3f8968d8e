#include "reckit/trust.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "reckit/csv.hpp"

namespace reckit::trust {

TrustGraph TrustGraph::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges, double alpha,
    int max_hops, bool fold_undirected) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (max_hops < 1) throw std::invalid_argument("max_hops must be >= 1");

  TrustGraph g;
  g.alpha_ = alpha;
  g.max_hops_ = max_hops;
  std::set<std::string> nodes;
  for (const auto& [a, b] : edges) {
    nodes.insert(a);
    nodes.insert(b);
  }
  g.nodes_.assign(nodes.begin(), nodes.end());
  const auto n = static_cast<Eigen::Index>(g.nodes_.size());
  g.adjacency_ = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;  // no self-loops
    const auto ia = *g.node_index(a);
    const auto ib = *g.node_index(b);
    g.adjacency_(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) = 1.0;
    if (fold_undirected)
      g.adjacency_(static_cast<Eigen::Index>(ib), static_cast<Eigen::Index>(ia)) = 1.0;
  }
  return g;
}

TrustGraph TrustGraph::from_csv(const std::string& path, double alpha, int max_hops,
                                bool fold_undirected) {
  const auto table = csv::read_file(path);
  const int ct = table.column("truster");
  const int ce = table.column("trustee");
  if (ct < 0 || ce < 0)
    throw std::runtime_error("trust CSV needs 'truster' and 'trustee' columns");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& row : table.rows) {
    if (row.size() <= static_cast<std::size_t>(std::max(ct, ce))) continue;
    edges.emplace_back(row[ct], row[ce]);
  }
  return from_edges(edges, alpha, max_hops, fold_undirected);
}

std::optional<std::size_t> TrustGraph::node_index(const std::string& id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

double spectral_radius(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  double radius = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd w = a.cwiseAbs() * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    radius = norm;
  }
  return radius;
}

Eigen::MatrixXd katz_similarity(const TrustGraph& g) {
  const Eigen::Index n = g.adjacency().rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  double coeff = 1.0;
  for (int h = 1; h <= g.max_hops(); ++h) {
    power = power * g.adjacency();
    coeff *= g.alpha();
    sum += coeff * power;
  }
  return sum;
}

Eigen::MatrixXd katz_similarity_closed(const TrustGraph& g) {
  const double radius = spectral_radius(g.adjacency());
  if (g.alpha() * radius >= 1.0)
    throw std::invalid_argument("alpha must be below 1/spectral_radius for the closed form");
  const Eigen::Index n = g.adjacency().rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  return (identity - g.alpha() * g.adjacency()).partialPivLu().solve(identity) - identity;
}

std::optional<double> trust_knn_predict(const std::string& user, const std::string& item,
                                        std::size_t k, const TrustGraph& g,
                                        const Eigen::MatrixXd& sim,
                                        const neighbors::RatingMatrix& train) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const auto iu = g.node_index(user);
  if (!iu) return std::nullopt;
  const auto ii = train.item_index(item);
  if (!ii) return std::nullopt;

  struct Candidate {
    double sim;
    double rating;
    std::string id;
  };
  std::vector<Candidate> candidates;
  for (const auto& [r, rating] : train.item_raters(*ii)) {
    const auto& rater_id = train.user_ids()[r];
    if (rater_id == user) continue;
    const auto ir = g.node_index(rater_id);
    if (!ir) continue;
    const double s = sim(static_cast<Eigen::Index>(*iu), static_cast<Eigen::Index>(*ir));
    if (s > 0.0) candidates.push_back({s, rating, rater_id});
  }
  if (candidates.empty()) return std::nullopt;
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return a.id < b.id;
  });
  if (candidates.size() > k) candidates.resize(k);
  std::vector<double> sims, ratings;
  for (const auto& c : candidates) {
    sims.push_back(c.sim);
    ratings.push_back(c.rating);
  }
  return neighbors::weighted_mean(sims, ratings);
}

}  // namespace reckit::trust
