#include "reckit/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reckit::neighbors {

RatingMatrix RatingMatrix::from_log(const corpus::InteractionLog& log,
                                    bool implicit_counts) {
  RatingMatrix m;
  m.user_ids_ = log.users();
  m.item_ids_ = log.items();
  for (std::size_t i = 0; i < m.user_ids_.size(); ++i) m.user_index_[m.user_ids_[i]] = i;
  for (std::size_t i = 0; i < m.item_ids_.size(); ++i) m.item_index_[m.item_ids_[i]] = i;

  // value, timestamp of the latest event per cell (or running count).
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::int64_t>> cells;
  for (const auto& e : log.events()) {
    const auto key = std::make_pair(m.user_index_.at(e.user), m.item_index_.at(e.item));
    if (implicit_counts) {
      auto [it, inserted] = cells.try_emplace(key, 1.0, e.timestamp);
      if (!inserted) it->second.first += 1.0;
    } else {
      auto [it, inserted] = cells.try_emplace(key, e.value, e.timestamp);
      if (!inserted && e.timestamp > it->second.second)
        it->second = {e.value, e.timestamp};
    }
  }

  m.profiles_.resize(m.user_ids_.size());
  m.raters_.resize(m.item_ids_.size());
  for (const auto& [key, vt] : cells) {
    m.profiles_[key.first].emplace_back(key.second, vt.first);
    m.raters_[key.second].emplace_back(key.first, vt.first);
  }
  m.norms_.resize(m.user_ids_.size(), 0.0);
  for (std::size_t u = 0; u < m.profiles_.size(); ++u) {
    double sq = 0.0;
    for (const auto& [i, v] : m.profiles_[u]) sq += v * v;
    m.norms_[u] = std::sqrt(sq);
  }
  return m;
}

RatingMatrix RatingMatrix::from_cells(
    const std::vector<std::tuple<std::string, std::string, double>>& cells) {
  RatingMatrix m;
  std::set<std::string> users, items;
  for (const auto& [u, i, v] : cells) {
    users.insert(u);
    items.insert(i);
  }
  m.user_ids_.assign(users.begin(), users.end());
  m.item_ids_.assign(items.begin(), items.end());
  for (std::size_t i = 0; i < m.user_ids_.size(); ++i) m.user_index_[m.user_ids_[i]] = i;
  for (std::size_t i = 0; i < m.item_ids_.size(); ++i) m.item_index_[m.item_ids_[i]] = i;

  std::map<std::pair<std::size_t, std::size_t>, double> dedup;
  for (const auto& [u, i, v] : cells)
    dedup[{m.user_index_.at(u), m.item_index_.at(i)}] = v;

  m.profiles_.resize(m.user_ids_.size());
  m.raters_.resize(m.item_ids_.size());
  for (const auto& [key, v] : dedup) {
    m.profiles_[key.first].emplace_back(key.second, v);
    m.raters_[key.second].emplace_back(key.first, v);
  }
  m.norms_.resize(m.user_ids_.size(), 0.0);
  for (std::size_t u = 0; u < m.profiles_.size(); ++u) {
    double sq = 0.0;
    for (const auto& [i, v] : m.profiles_[u]) sq += v * v;
    m.norms_[u] = std::sqrt(sq);
  }
  return m;
}

RatingMatrix RatingMatrix::transposed() const {
  RatingMatrix t;
  t.user_ids_ = item_ids_;
  t.item_ids_ = user_ids_;
  t.user_index_ = item_index_;
  t.item_index_ = user_index_;
  t.profiles_ = raters_;
  t.raters_ = profiles_;
  t.norms_.resize(t.profiles_.size(), 0.0);
  for (std::size_t u = 0; u < t.profiles_.size(); ++u) {
    double sq = 0.0;
    for (const auto& [i, v] : t.profiles_[u]) sq += v * v;
    t.norms_[u] = std::sqrt(sq);
  }
  return t;
}

std::optional<std::size_t> RatingMatrix::user_index(const std::string& id) const {
  auto it = user_index_.find(id);
  if (it == user_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> RatingMatrix::item_index(const std::string& id) const {
  auto it = item_index_.find(id);
  if (it == item_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> RatingMatrix::rating(std::size_t u, std::size_t i) const {
  const auto& p = profiles_[u];
  auto it = std::lower_bound(p.begin(), p.end(), i,
                             [](const auto& a, std::size_t b) { return a.first < b; });
  if (it == p.end() || it->first != i) return std::nullopt;
  return it->second;
}

std::optional<double> RatingMatrix::item_mean(std::size_t i) const {
  const auto& r = raters_[i];
  if (r.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [u, v] : r) sum += v;
  return sum / static_cast<double>(r.size());
}

double RatingMatrix::global_mean() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : profiles_) {
    for (const auto& [i, v] : p) sum += v;
    n += p.size();
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

namespace {

// Walks two sorted sparse profiles in lockstep.
template <typename Fn>
void for_each_common(const Profile& a, const Profile& b, Fn&& fn) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      fn(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
}

double norm_of(const Profile& p) {
  double sq = 0.0;
  for (const auto& [i, v] : p) sq += v * v;
  return std::sqrt(sq);
}

}  // namespace

double similarity(const Profile& a, const Profile& b, const SimilarityConfig& cfg) {
  std::size_t overlap = 0;
  double dot = 0.0, sum_a = 0.0, sum_b = 0.0;
  for_each_common(a, b, [&](double va, double vb) {
    ++overlap;
    dot += va * vb;
    sum_a += va;
    sum_b += vb;
  });
  if (overlap < cfg.min_overlap) return 0.0;

  if (cfg.metric == SimilarityMetric::Cosine) {
    const double na = norm_of(a);
    const double nb = norm_of(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
  }

  // Pearson on co-rated entries only.
  const double n = static_cast<double>(overlap);
  const double mean_a = sum_a / n;
  const double mean_b = sum_b / n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for_each_common(a, b, [&](double va, double vb) {
    cov += (va - mean_a) * (vb - mean_b);
    var_a += (va - mean_a) * (va - mean_a);
    var_b += (vb - mean_b) * (vb - mean_b);
  });
  if (var_a == 0.0 || var_b == 0.0) return 0.0;
  return cov / std::sqrt(var_a * var_b);
}

double weighted_mean(std::span<const double> sims, std::span<const double> ratings) {
  if (sims.size() != ratings.size() || sims.empty())
    throw std::invalid_argument("weighted_mean needs equal non-empty spans");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    num += sims[i] * ratings[i];
    den += sims[i];
  }
  if (den <= 0.0) throw std::invalid_argument("non-positive similarity mass");
  return num / den;
}

UserKnn::UserKnn(RatingMatrix train, SimilarityConfig cfg)
    : matrix_(std::move(train)), cfg_(cfg) {
  const std::size_t n = matrix_.n_users();
  sim_.assign(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double s =
          neighbors::similarity(matrix_.user_profile(u), matrix_.user_profile(v), cfg_);
      sim_[u * n + v] = s;
      sim_[v * n + u] = s;
    }
  }
}

double UserKnn::similarity(std::size_t u, std::size_t v) const {
  return sim_[u * matrix_.n_users() + v];
}

Neighborhood UserKnn::top_k_neighbors(const std::string& user, const std::string& item,
                                      std::size_t k) const {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  Neighborhood hood{user, item, {}};
  const auto iu = matrix_.user_index(user);
  const auto ii = matrix_.item_index(item);
  if (!ii) return hood;

  std::vector<Neighbor> candidates;
  for (const auto& [c, rating] : matrix_.item_raters(*ii)) {
    if (iu && c == *iu) continue;
    const double s = iu ? similarity(*iu, c) : 0.0;
    if (s > 0.0) candidates.push_back({matrix_.user_ids()[c], s});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  });
  if (candidates.size() > k) candidates.resize(k);
  hood.members = std::move(candidates);
  return hood;
}

std::optional<double> UserKnn::predict_rating(const Neighborhood& hood) const {
  if (hood.empty()) return std::nullopt;
  const auto ii = matrix_.item_index(hood.item);
  if (!ii) return std::nullopt;
  std::vector<double> sims, ratings;
  for (const auto& m : hood.members) {
    const auto iu = matrix_.user_index(m.id);
    if (!iu) continue;
    const auto r = matrix_.rating(*iu, *ii);
    if (!r) continue;
    sims.push_back(m.similarity);
    ratings.push_back(*r);
  }
  if (sims.empty()) return std::nullopt;
  return weighted_mean(sims, ratings);
}

std::optional<double> UserKnn::predict(const std::string& user, const std::string& item,
                                       std::size_t k) const {
  return predict_rating(top_k_neighbors(user, item, k));
}

ItemKnn::ItemKnn(const RatingMatrix& train, SimilarityConfig cfg)
    : inner_(train.transposed(), cfg), forward_(train) {}

std::optional<double> ItemKnn::predict(const std::string& user, const std::string& item,
                                       std::size_t k) const {
  // In the transposed matrix, "users" are items and "items" are users, so the
  // neighborhood of (item, user) is the set of similar items the user rated.
  const auto hood = inner_.top_k_neighbors(item, user, k);
  return inner_.predict_rating(hood);
}

std::vector<std::string> recommend_top_n(const RatingMatrix& train,
                                         const std::string& user, std::size_t n,
                                         const Scorer& scorer) {
  if (n == 0) return {};
  const auto iu = train.user_index(user);
  std::vector<std::pair<double, std::string>> scored;
  for (std::size_t i = 0; i < train.n_items(); ++i) {
    if (iu && train.rating(*iu, i)) continue;  // seen
    const auto s = scorer(user, train.item_ids()[i]);
    if (s) scored.emplace_back(*s, train.item_ids()[i]);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (scored.size() > n) scored.resize(n);
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (const auto& [s, id] : scored) out.push_back(id);
  return out;
}

std::vector<std::string> most_popular(const corpus::InteractionLog& log, std::size_t n) {
  const auto pop = corpus::item_popularity(log);
  std::vector<std::pair<double, std::string>> order;
  order.reserve(pop.size());
  for (const auto& [item, p] : pop) order.emplace_back(p, item);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (order.size() > n) order.resize(n);
  std::vector<std::string> out;
  out.reserve(order.size());
  for (const auto& [p, id] : order) out.push_back(id);
  return out;
}

std::optional<double> predict_with_fallback(const UserKnn& knn, const std::string& user,
                                            const std::string& item, std::size_t k,
                                            Fallback fallback) {
  const auto direct = knn.predict(user, item, k);
  if (direct || fallback == Fallback::None) return direct;
  if (fallback == Fallback::ItemMean) {
    const auto ii = knn.matrix().item_index(item);
    if (ii) {
      const auto mean = knn.matrix().item_mean(*ii);
      if (mean) return mean;
    }
  }
  return knn.matrix().global_mean();
}

}  // namespace reckit::neighbors
