#include "reckit/privacy.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace reckit::privacy {

RrOutcome randomized_response_tagged(double rating, const DpMechanism& mech, Rng& rng) {
  if (mech.levels < 2) throw std::invalid_argument("mechanism needs >= 2 rating levels");
  if (rating < mech.rating_range.min || rating > mech.rating_range.max)
    throw std::invalid_argument("rating outside the mechanism's rating range");
  if (mech.truth_only) return {rating, RrBranch::Truth};
  if (rng.coin()) return {rating, RrBranch::Truth};
  if (rng.coin()) return {rating, RrBranch::Truth};
  const std::size_t idx = static_cast<std::size_t>(rng.uniform_int(mech.levels));
  return {mech.level_value(idx), RrBranch::Uniform};
}

double randomized_response(double rating, const DpMechanism& mech, Rng& rng) {
  return randomized_response_tagged(rating, mech, rng).value;
}

std::vector<double> dp_rating_set(const neighbors::Neighborhood& hood,
                                  const DpMechanism& mech, Rng& rng,
                                  const neighbors::RatingMatrix& train) {
  if (hood.empty()) throw std::invalid_argument("empty neighborhood");
  const auto ii = train.item_index(hood.item);
  if (!ii) throw std::invalid_argument("unknown item: " + hood.item);
  std::vector<double> out;
  out.reserve(hood.size());
  for (const auto& m : hood.members) {
    const auto iu = train.user_index(m.id);
    const auto r = iu ? train.rating(*iu, *ii) : std::nullopt;
    if (!r) throw std::invalid_argument("neighbor did not rate the query item");
    out.push_back(randomized_response(*r, mech, rng));
  }
  return out;
}

std::uint64_t UsageLedger::usage(const std::string& user) const {
  auto it = usage_.find(user);
  return it == usage_.end() ? 0 : it->second;
}

UserPartition UsageLedger::classify(const std::vector<std::string>& universe) const {
  std::set<std::string> all(universe.begin(), universe.end());
  for (const auto& [user, c] : usage_) all.insert(user);
  UserPartition p;
  for (const auto& user : all)
    (usage(user) <= tau_ ? p.secure : p.vulnerable).push_back(user);
  return p;
}

void UsageLedger::write_csv(std::ostream& out,
                            const std::vector<std::string>& universe) const {
  std::set<std::string> all(universe.begin(), universe.end());
  for (const auto& [user, c] : usage_) all.insert(user);
  out << "user,usage,secure\n";
  for (const auto& user : all)
    out << user << ',' << usage(user) << ',' << (vulnerable(user) ? 0 : 1) << '\n';
}

neighbors::Neighborhood ReuseKnn::neighborhood(const std::string& user,
                                               const std::string& item, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const auto& matrix = base_.matrix();
  neighbors::Neighborhood hood{user, item, {}};
  const auto ii = matrix.item_index(item);
  if (!ii) return hood;
  const auto iu = matrix.user_index(user);
  if (!iu) return hood;

  const auto& used = used_for_[user];
  struct Candidate {
    bool reused;
    double sim;
    std::string id;
  };
  std::vector<Candidate> candidates;
  for (const auto& [c, rating] : matrix.item_raters(*ii)) {
    if (c == *iu) continue;
    const double s = base_.similarity(*iu, c);
    if (s <= 0.0) continue;
    const auto& id = matrix.user_ids()[c];
    candidates.push_back({used.count(id) > 0, s, id});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.reused != b.reused) return a.reused;  // reuse-first
    if (a.sim != b.sim) return a.sim > b.sim;
    return a.id < b.id;
  });
  if (candidates.size() > k) candidates.resize(k);

  auto& used_mut = used_for_[user];
  for (const auto& c : candidates) {
    hood.members.push_back({c.id, c.sim});
    ledger_.record(c.id);
    used_mut.insert(c.id);
  }
  return hood;
}

std::optional<double> ReuseKnn::dp_predict(const std::string& user, const std::string& item,
                                           std::size_t k, const DpMechanism& mech,
                                           Rng& rng) {
  const auto hood = neighborhood(user, item, k);
  if (hood.empty()) return std::nullopt;
  const auto& matrix = base_.matrix();
  const auto ii = matrix.item_index(item);
  std::vector<double> sims, ratings;
  for (const auto& m : hood.members) {
    const auto iu = matrix.user_index(m.id);
    const auto r = matrix.rating(*iu, *ii);
    if (!r) continue;
    sims.push_back(m.similarity);
    // Vulnerability is judged against the ledger state after this query's
    // own usage was recorded.
    ratings.push_back(ledger_.vulnerable(m.id) ? randomized_response(*r, mech, rng) : *r);
  }
  if (sims.empty()) return std::nullopt;
  return neighbors::weighted_mean(sims, ratings);
}

std::optional<double> dp_predict_full(const neighbors::UserKnn& knn,
                                      const std::string& user, const std::string& item,
                                      std::size_t k, const DpMechanism& mech, Rng& rng) {
  const auto hood = knn.top_k_neighbors(user, item, k);
  if (hood.empty()) return std::nullopt;
  const auto perturbed = dp_rating_set(hood, mech, rng, knn.matrix());
  std::vector<double> sims;
  sims.reserve(hood.size());
  for (const auto& m : hood.members) sims.push_back(m.similarity);
  return neighbors::weighted_mean(sims, perturbed);
}

}  // namespace reckit::privacy
