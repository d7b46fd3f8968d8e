// Acceptance gate: one pass/fail line per criterion, non-zero exit on any
// failure. Each criterion checks its stated tolerance and time budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reckit/actr.hpp"
#include "reckit/corpus.hpp"
#include "reckit/eval.hpp"
#include "reckit/fairsim.hpp"
#include "reckit/neighbors.hpp"
#include "reckit/privacy.hpp"
#include "reckit/rng.hpp"
#include "reckit/trust.hpp"
#include "support/synth.hpp"

using namespace reckit;

namespace {

bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// ---------------------------------------------------------------- criterion 1

// Brute-force cosine UserKNN prediction from raw (user -> item -> rating)
// maps, independent of the library's matrix layout and caches.
std::optional<double> oracle_predict(
    const std::map<std::string, std::map<std::string, double>>& ratings,
    const std::string& user, const std::string& item, std::size_t k) {
  const auto& target = ratings.at(user);
  struct Cand {
    std::string id;
    double sim, rating;
  };
  std::vector<Cand> cands;
  for (const auto& [other, profile] : ratings) {
    if (other == user) continue;
    auto ri = profile.find(item);
    if (ri == profile.end()) continue;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [i, v] : target) {
      na += v * v;
      auto it = profile.find(i);
      if (it != profile.end()) dot += v * it->second;
    }
    for (const auto& [i, v] : profile) nb += v * v;
    if (na == 0.0 || nb == 0.0) continue;
    const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
    if (sim > 0.0) cands.push_back({other, sim, ri->second});
  }
  if (cands.empty()) return std::nullopt;
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return a.id < b.id;
  });
  if (cands.size() > k) cands.resize(k);
  double num = 0.0, den = 0.0;
  for (const auto& c : cands) {
    num += c.sim * c.rating;
    den += c.sim;
  }
  return num / den;
}

Eigen::MatrixXd oracle_katz(const Eigen::MatrixXd& a, double alpha, int hops) {
  const auto n = a.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (int h = 1; h <= hops; ++h) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l) next(i, j) += power(i, l) * a(l, j);
    power = next;
    sum += std::pow(alpha, h) * power;
  }
  return sum;
}

bool criterion1(std::string& detail) {
  Rng rng(101);

  // predict_rating against the brute-force KNN oracle
  std::size_t checked = 0;
  while (checked < 20) {
    std::map<std::string, std::map<std::string, double>> ratings;
    std::vector<std::tuple<std::string, std::string, double>> cells;
    for (int u = 0; u < 12; ++u)
      for (int i = 0; i < 8; ++i) {
        if (rng.uniform() > 0.6) continue;
        const auto uid = "u" + std::to_string(10 + u);
        const auto iid = "i" + std::to_string(i);
        const double v = rng.uniform(1.0, 5.0);
        ratings[uid][iid] = v;
        cells.emplace_back(uid, iid, v);
      }
    const neighbors::UserKnn knn(neighbors::RatingMatrix::from_cells(cells),
                                 neighbors::SimilarityConfig::cosine());
    const auto user = "u" + std::to_string(10 + rng.uniform_int(12));
    const auto item = "i" + std::to_string(rng.uniform_int(8));
    if (!ratings.count(user)) continue;
    const std::size_t k = 1 + rng.uniform_int(5);
    const auto want = oracle_predict(ratings, user, item, k);
    const auto got = knn.predict(user, item, k);
    if (!want || !got) continue;
    if (!close_rel(*got, *want)) {
      detail = "predict_rating mismatch";
      return false;
    }
    ++checked;
  }

  // bll_score against a direct power-sum oracle
  for (int trial = 0; trial < 20; ++trial) {
    const double d = rng.uniform(0.3, 2.0);
    const std::size_t n = 1 + rng.uniform_int(6);
    std::vector<corpus::Interaction> events;
    const double now = 1e7 + rng.uniform(0, 1e5);
    double want = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ts = rng.uniform(0.0, 9e6);
      events.push_back({"u", "x", 1.0, static_cast<std::int64_t>(ts)});
      const double t = std::max((now - static_cast<std::int64_t>(ts)) / 3600.0, 1.0);
      want += std::pow(t, -d);
    }
    want = std::log(want);
    actr::ActrConfig cfg;
    cfg.decay = d;
    const auto model = actr::ActrModel::train(
        corpus::InteractionLog(events, {{"x", {}}}, {1, 5}), actr::UnitKind::Track, cfg);
    const auto got = model.bll_score("u", "x", now);
    if (!got || !close_rel(*got, want)) {
      detail = "bll_score mismatch";
      return false;
    }
  }

  // activation_score against recomputed histories and co-occurrence counts
  std::size_t act_checked = 0;
  const std::vector<std::string> genre_pool{"ga", "gb", "gc", "gd"};
  while (act_checked < 20) {
    std::map<std::string, corpus::ItemMeta> meta;
    for (int i = 0; i < 6; ++i) {
      corpus::ItemMeta m;
      m.genres.insert(genre_pool[rng.uniform_int(4)]);
      if (rng.coin()) m.genres.insert(genre_pool[rng.uniform_int(4)]);
      meta["i" + std::to_string(i)] = m;
    }
    std::vector<corpus::Interaction> events;
    for (int e = 0; e < 15; ++e)
      events.push_back({"u" + std::to_string(rng.uniform_int(4)),
                        "i" + std::to_string(rng.uniform_int(6)), 1.0,
                        static_cast<std::int64_t>(rng.uniform(0.0, 9e6))});
    const double d = rng.uniform(0.3, 2.0);
    actr::ActrConfig cfg;
    cfg.decay = d;
    const auto log = corpus::InteractionLog(events, meta, {1, 5});
    const auto model = actr::ActrModel::train(log, actr::UnitKind::Genre, cfg);

    std::map<std::pair<std::string, std::string>, std::vector<double>> hist;
    std::map<std::string, std::size_t> occ;
    std::map<std::pair<std::string, std::string>, std::size_t> cooc;
    for (const auto& e : events) {
      const auto& genres = meta.at(e.item).genres;
      for (const auto& g : genres) {
        hist[{e.user, g}].push_back(static_cast<double>(e.timestamp));
        ++occ[g];
        for (const auto& unit : genres) ++cooc[{g, unit}];
      }
    }
    const auto user = "u" + std::to_string(rng.uniform_int(4));
    const auto unit = genre_pool[rng.uniform_int(4)];
    std::vector<std::string> context;
    for (const auto& g : genre_pool)
      if (rng.coin()) context.push_back(g);
    if (context.empty()) context.push_back(genre_pool[0]);
    const double now = 1e7;

    auto hit = hist.find({user, unit});
    if (hit == hist.end()) continue;
    double bll = 0.0;
    for (double ts : hit->second) bll += std::pow(std::max((now - ts) / 3600.0, 1.0), -d);
    double want = std::log(bll);
    for (const auto& j : context) {
      auto oj = occ.find(j);
      if (oj == occ.end()) continue;
      auto cj = cooc.find({j, unit});
      const double c = cj == cooc.end() ? 0.0 : static_cast<double>(cj->second);
      want += (1.0 / static_cast<double>(context.size())) *
              std::log(1.0 + c / static_cast<double>(oj->second));
    }
    const auto got = model.activation_score(user, unit, context, now);
    if (!got || !close_rel(*got, want)) {
      detail = "activation_score mismatch";
      return false;
    }
    ++act_checked;
  }

  // kl_miscalibration against the smoothed definition written out directly
  for (int trial = 0; trial < 20; ++trial) {
    eval::GenreDistribution p, q;
    double sp = 0.0, sq = 0.0;
    for (const auto& g : genre_pool) {
      p[g] = rng.uniform() + 0.01;
      q[g] = rng.uniform() + 0.01;
      sp += p[g];
      sq += q[g];
    }
    for (auto& [g, v] : p) v /= sp;
    for (auto& [g, v] : q) v /= sq;
    double want = 0.0;
    for (const auto& g : genre_pool)
      want += p[g] * std::log(p[g] / (0.99 * q[g] + 0.01 * p[g]));
    if (!close_rel(eval::kl_miscalibration(p, q), want)) {
      detail = "kl_miscalibration mismatch";
      return false;
    }
  }

  // popularity_lift against its definition
  for (int trial = 0; trial < 20; ++trial) {
    const double gp = rng.uniform(0.1, 0.9);
    const double gq = rng.uniform(0.0, 1.0);
    if (!close_rel(eval::popularity_lift(gp, gq), (gq - gp) / gp)) {
      detail = "popularity_lift mismatch";
      return false;
    }
  }

  // katz_similarity against naive walk counting
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<std::string, std::string>> edges;
    const std::size_t n = 3 + rng.uniform_int(4);
    for (std::size_t e = 0; e < 2 * n; ++e)
      edges.emplace_back("n" + std::to_string(rng.uniform_int(n)),
                         "n" + std::to_string(rng.uniform_int(n)));
    const int hops = 1 + static_cast<int>(rng.uniform_int(4));
    const auto g = trust::TrustGraph::from_edges(edges, 0.2, hops);
    const auto got = trust::katz_similarity(g);
    const auto want = oracle_katz(g.adjacency(), 0.2, hops);
    for (Eigen::Index i = 0; i < got.rows(); ++i)
      for (Eigen::Index j = 0; j < got.cols(); ++j)
        if (!close_rel(got(i, j), want(i, j))) {
          detail = "katz_similarity mismatch";
          return false;
        }
  }

  detail = "6 equations, >=20 randomized instances each, 1e-9 relative error";
  return true;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2(std::string& detail) {
  privacy::DpMechanism mech{{1.0, 5.0}, 5, 0, false};
  Rng rng(202);
  const std::size_t trials = 100000;
  std::size_t truth = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto out = privacy::randomized_response_tagged(4.0, mech, rng);
    truth += out.branch == privacy::RrBranch::Truth;
  }
  const double freq = static_cast<double>(truth) / static_cast<double>(trials);
  std::ostringstream msg;
  msg << "truth-branch frequency " << freq << " vs 0.75 +/- 0.005";
  detail = msg.str();
  return std::abs(freq - 0.75) <= 0.005;
}

// ---------------------------------------------------------------- criterion 3

std::uint64_t median_usage(const std::map<std::string, std::uint64_t>& usage,
                           const std::vector<std::string>& universe) {
  std::vector<std::uint64_t> counts;
  counts.reserve(universe.size());
  for (const auto& u : universe) {
    auto it = usage.find(u);
    counts.push_back(it == usage.end() ? 0 : it->second);
  }
  std::nth_element(counts.begin(), counts.begin() + counts.size() / 2, counts.end());
  return counts[counts.size() / 2];
}

bool criterion3(std::string& detail) {
  const std::size_t n_queries = 5000;
  const std::size_t k = 10;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::SynthSpec spec;
    spec.seed = seed;
    // A steeper head concentrates plain-KNN usage on hub users, which is the
    // regime where per-target reuse measurably shrinks the vulnerable set.
    spec.zipf_exponent = 1.5;
    const auto log = synth::long_tail_log(spec);
    const neighbors::UserKnn knn(neighbors::RatingMatrix::from_log(log),
                                 neighbors::SimilarityConfig::cosine());
    const auto& users = knn.matrix().user_ids();
    const auto& items = knn.matrix().item_ids();

    Rng qrng(seed * 7919);
    std::vector<std::pair<std::string, std::string>> queries(n_queries);
    for (auto& q : queries)
      q = {users[qrng.uniform_int(users.size())], items[qrng.uniform_int(items.size())]};

    std::map<std::string, std::uint64_t> plain_usage;
    for (const auto& [u, i] : queries)
      for (const auto& m : knn.top_k_neighbors(u, i, k).members) ++plain_usage[m.id];
    const std::uint64_t tau = median_usage(plain_usage, users);

    privacy::UsageLedger plain(tau);
    for (const auto& [u, count] : plain_usage)
      for (std::uint64_t c = 0; c < count; ++c) plain.record(u);
    privacy::ReuseKnn reuse(knn, tau);
    for (const auto& [u, i] : queries) reuse.neighborhood(u, i, k);

    const auto plain_vuln = plain.classify(users).vulnerable.size();
    const auto reuse_vuln = reuse.ledger().classify(users).vulnerable.size();
    if (reuse_vuln >= plain_vuln) {
      std::ostringstream msg;
      msg << "seed " << seed << ": reuse vulnerable " << reuse_vuln
          << " not below plain " << plain_vuln;
      detail = msg.str();
      return false;
    }
  }
  detail = "reuse neighborhoods leave strictly fewer vulnerable users, 10/10 seeds";
  return true;
}

// ---------------------------------------------------------------- criterion 4

bool criterion4(std::string& detail) {
  const std::size_t k = 10;
  double mae_plain = 0.0, mae_reuse = 0.0, mae_full = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::SynthSpec spec;
    spec.seed = seed;
    spec.zipf_exponent = 1.5;  // same log family as the reuse criterion
    const auto log = synth::long_tail_log(spec);
    const auto split = corpus::chronological_split(log, 0.8);
    const neighbors::UserKnn knn(neighbors::RatingMatrix::from_log(split.train),
                                 neighbors::SimilarityConfig::cosine());
    const privacy::DpMechanism mech{{1.0, 5.0}, 5, seed, false};

    std::map<std::string, std::uint64_t> plain_usage;
    std::vector<double> p_plain, p_reuse, p_full, truth;
    for (const auto& e : split.test.events()) {
      const auto hood = knn.top_k_neighbors(e.user, e.item, k);
      if (hood.empty()) continue;
      for (const auto& m : hood.members) ++plain_usage[m.id];
      p_plain.push_back(*knn.predict_rating(hood));
      truth.push_back(e.value);
    }
    const std::uint64_t tau = median_usage(plain_usage, knn.matrix().user_ids());

    privacy::ReuseKnn reuse(knn, tau);
    Rng rng_reuse(seed * 31 + 1), rng_full(seed * 31 + 2);
    std::vector<double> truth_dp;
    for (const auto& e : split.test.events()) {
      const auto reuse_p = reuse.dp_predict(e.user, e.item, k, mech, rng_reuse);
      const auto full_p =
          privacy::dp_predict_full(knn, e.user, e.item, k, mech, rng_full);
      if (!reuse_p || !full_p) continue;
      p_reuse.push_back(*reuse_p);
      p_full.push_back(*full_p);
      truth_dp.push_back(e.value);
    }
    mae_plain += eval::mae(p_plain, truth);
    mae_reuse += eval::mae(p_reuse, truth_dp);
    mae_full += eval::mae(p_full, truth_dp);
  }
  mae_plain /= 10;
  mae_reuse /= 10;
  mae_full /= 10;

  const double outer = mae_full - mae_plain;
  std::ostringstream msg;
  msg << "mean MAE plain " << mae_plain << " <= reuse+DP " << mae_reuse
      << " <= full DP " << mae_full;
  detail = msg.str();
  return outer > 0.0 && mae_reuse - mae_plain >= 0.01 * outer &&
         mae_full - mae_reuse >= 0.01 * outer;
}

// ---------------------------------------------------------------- criterion 5

bool criterion5(std::string& detail) {
  const auto gaps = synth::power_law_gaps(1.48, 10000, 55);
  const double d = actr::fit_decay_from_gaps(gaps);
  std::ostringstream msg;
  msg << "recovered d = " << d << " vs 1.48 +/- 0.05 at 1e4 events";
  detail = msg.str();
  return std::abs(d - 1.48) <= 0.05;
}

// ---------------------------------------------------------------- criterion 6

double reco_correlation(const neighbors::RatingMatrix& train,
                        const std::map<std::string, double>& popularity,
                        const neighbors::Scorer& scorer) {
  std::map<std::string, double> freq;
  for (const auto& user : train.user_ids())
    for (const auto& item : neighbors::recommend_top_n(train, user, 10, scorer))
      freq[item] += 1.0;
  return eval::popularity_reco_correlation(freq, popularity);
}

bool criterion6(std::string& detail) {
  synth::SynthSpec spec;
  spec.seed = 6;
  // Blockbuster plateau: a flat, widely-consumed head makes recommendation
  // frequency track popularity instead of the per-user seen-item filter.
  spec.head_items = 15;
  spec.head_rate = 0.6;
  const auto log = synth::long_tail_log(spec);
  const auto split = corpus::chronological_split(log, 0.8);
  const auto train = neighbors::RatingMatrix::from_log(split.train);
  const auto popularity = corpus::item_popularity(split.train);
  const neighbors::UserKnn knn(train, neighbors::SimilarityConfig::cosine());

  const auto pop_of = [&](const std::string& item) -> std::optional<double> {
    auto it = popularity.find(item);
    if (it == popularity.end()) return std::nullopt;
    return it->second;
  };
  const double r_mostpop = reco_correlation(
      train, popularity, [&](const std::string&, const std::string& i) { return pop_of(i); });
  const double r_userknn = reco_correlation(
      train, popularity,
      [&](const std::string& u, const std::string& i) { return knn.predict(u, i, 10); });
  const double r_inverted = reco_correlation(
      train, popularity, [&](const std::string&, const std::string& i) {
        const auto p = pop_of(i);
        return p ? std::optional<double>(-*p) : std::nullopt;
      });

  std::ostringstream msg;
  msg << "r mostpop " << r_mostpop << " (> 0.9), userknn " << r_userknn
      << " (> 0.3), inverted " << r_inverted << " (< 0)";
  detail = msg.str();
  return r_mostpop > 0.9 && r_userknn > 0.3 && r_inverted < 0.0;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7(std::string& detail) {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::SynthSpec spec;
    spec.seed = seed;
    const auto log = synth::long_tail_log(spec);
    const auto split = corpus::chronological_split(log, 0.8);
    const neighbors::UserKnn knn(neighbors::RatingMatrix::from_log(split.train),
                                 neighbors::SimilarityConfig::cosine());
    const auto groups =
        corpus::assign_popularity_groups(split.train, corpus::GroupScheme::TercilePopularity);

    std::map<std::string, std::vector<double>> pred_by_user, truth_by_user;
    for (const auto& e : split.test.events()) {
      if (const auto p = knn.predict(e.user, e.item, 10)) {
        pred_by_user[e.user].push_back(*p);
        truth_by_user[e.user].push_back(e.value);
      }
    }
    double low = 0.0, high = 0.0;
    std::size_t n_low = 0, n_high = 0;
    for (const auto& [user, pred] : pred_by_user) {
      auto git = groups.groups.find(user);
      if (git == groups.groups.end()) continue;
      const double m = eval::mae(pred, truth_by_user[user]);
      if (git->second == "LowPop") {
        low += m;
        ++n_low;
      } else if (git->second == "HighPop") {
        high += m;
        ++n_high;
      }
    }
    if (n_low && n_high && low / n_low > high / n_high) ++wins;
  }
  std::ostringstream msg;
  msg << "LowPop MAE above HighPop in " << wins << "/10 seeds (need >= 8)";
  detail = msg.str();
  return wins >= 8;
}

// ---------------------------------------------------------------- criterion 8

bool criterion8(std::string& detail) {
  // Candidate T is reachable only through the social component: the target
  // user never played it and its genre is outside the context.
  std::map<std::string, corpus::ItemMeta> meta;
  meta["K"].genres = {"g"};
  meta["shared"].genres = {"g"};
  meta["T"].genres = {"other"};
  std::vector<corpus::Interaction> events{
      {"u", "K", 1, 100},      {"u", "K", 1, 200},      {"u", "shared", 1, 300},
      {"v", "shared", 1, 150}, {"v", "T", 1, 250},      {"v", "T", 1, 350},
  };
  actr::ActrConfig cfg;
  cfg.decay = 0.5;
  const auto model = actr::ActrModel::train(corpus::InteractionLog(events, meta, {1, 5}),
                                            actr::UnitKind::Track, cfg);
  const auto matrix = model.attribute_components("u", {"T", "K"}, {"g"}, 1e6);
  for (const auto& row : matrix.rows) {
    double sum = 0.0;
    for (double s : row.share) sum += s;
    if (std::abs(sum - 1.0) > 1e-9) {
      detail = "attribution row does not sum to 1";
      return false;
    }
  }
  const auto& t_row = matrix.rows[0];
  const bool social_only = t_row.unit == "T" && t_row.share[0] == 0.0 &&
                           t_row.share[1] == 0.0 && t_row.share[2] == 0.0 &&
                           std::abs(t_row.share[3] - 1.0) <= 1e-9 &&
                           !t_row.flagged_uniform;
  if (!social_only) {
    std::ostringstream msg;
    msg << "social-only candidate row (" << t_row.share[0] << "," << t_row.share[1]
        << "," << t_row.share[2] << "," << t_row.share[3] << ") != (0,0,0,1)";
    detail = msg.str();
    return false;
  }

  // Rows also sum to 1 on a larger trained model.
  synth::SynthSpec spec;
  spec.n_users = 20;
  spec.n_items = 40;
  spec.events_per_user = 15;
  spec.seed = 8;
  const auto log = synth::long_tail_log(spec);
  const auto big = actr::ActrModel::train(log, actr::UnitKind::Track, cfg);
  for (int u = 0; u < 10; ++u) {
    const auto user = synth::user_id(u);
    std::vector<std::string> recs;
    for (int i = 0; i < 12; ++i) recs.push_back(synth::item_id(i));
    const auto attr =
        big.attribute_components(user, recs, big.default_context(user), 1e9);
    for (const auto& row : attr.rows) {
      double sum = 0.0;
      for (double s : row.share) sum += s;
      if (std::abs(sum - 1.0) > 1e-9) {
        detail = "attribution row does not sum to 1 on trained model";
        return false;
      }
    }
  }
  detail = "rows sum to 1 +/- 1e-9; social-only candidate attributes (0,0,0,1)";
  return true;
}

// ---------------------------------------------------------------- criterion 9

double binom_tail_p(int successes, int n) {
  // P(X >= successes) under p = 0.5
  double p = 0.0;
  for (int k = successes; k <= n; ++k) {
    double c = 1.0;
    for (int j = 0; j < k; ++j) c = c * (n - j) / (j + 1);
    p += c * std::pow(0.5, n);
  }
  return p;
}

bool criterion9(std::string& detail) {
  // Larger population and a short horizon keep the run in the transient
  // regime where the help dynamics separate the variants cleanly; long
  // horizons pile every agent onto the hiring threshold, where refit
  // classifiers behave chaotically.
  fairsim::LogisticHyper hyper;
  hyper.max_epochs = 200;

  int successes = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    fairsim::SimConfig cfg;
    cfg.n_agents = 800;
    cfg.iterations = 10;
    cfg.seed = seed;
    cfg.variant = fairsim::ClassifierVariant::Unbiased;
    const auto unbiased = fairsim::run_simulation(cfg, hyper);
    cfg.variant = fairsim::ClassifierVariant::Biased;
    const auto biased = fairsim::run_simulation(cfg, hyper);

    const auto& ub = unbiased.iterations.back();
    const auto& bb = biased.iterations.back();
    const bool smaller_gap =
        bb.base_rate_parity.difference < ub.base_rate_parity.difference;
    const bool more_misclassified =
        bb.misclassified_protected > ub.misclassified_protected;
    if (smaller_gap && more_misclassified) ++successes;
  }
  const double p = binom_tail_p(successes, 20);

  // Null run: identical group means must stay near parity.
  fairsim::SimConfig null_cfg;
  null_cfg.n_agents = 800;
  null_cfg.iterations = 10;
  null_cfg.privileged_mean = 0.5;
  null_cfg.protected_mean = 0.5;
  null_cfg.seed = 99;
  const auto null_traj = fairsim::run_simulation(null_cfg, hyper);
  const auto& last = null_traj.iterations.back();
  const double n_half = static_cast<double>(null_cfg.n_agents) / 2.0;
  const double pooled = (last.base_rate_parity.rate_privileged +
                         last.base_rate_parity.rate_protected) / 2.0;
  const double se = std::sqrt(std::max(pooled * (1.0 - pooled), 1e-12) * (2.0 / n_half));
  const bool null_ok = last.base_rate_parity.difference <= 3.0 * se;

  std::ostringstream msg;
  msg << successes << "/20 paired seeds (sign test p = " << p
      << "), null-run parity gap " << last.base_rate_parity.difference << " vs 3 SE "
      << 3.0 * se;
  detail = msg.str();
  return p < 0.05 && null_ok;
}

// --------------------------------------------------------------- criterion 10

bool criterion10(std::string& detail) {
  // privileged: 2/4 positive (0.5); protected: 2/5 positive (0.4)
  const std::vector<int> labels{1, 1, 0, 0, 1, 1, 0, 0, 0};
  const std::vector<int> attrs{0, 0, 0, 0, 1, 1, 1, 1, 1};
  const auto parity = fairsim::statistical_parity(labels, attrs);
  std::ostringstream msg;
  msg << "rates 0.5/0.4 -> ratio " << parity.ratio << ", four-fifths at boundary "
      << (fairsim::four_fifths_check(0.8) ? "passes" : "fails");
  detail = msg.str();
  return std::abs(parity.ratio - 0.8) <= 1e-12 &&
         std::abs(parity.rate_privileged - 0.5) <= 1e-12 &&
         std::abs(parity.rate_protected - 0.4) <= 1e-12 &&
         fairsim::four_fifths_check(parity.ratio) && fairsim::four_fifths_check(0.8) &&
         !fairsim::four_fifths_check(0.8 - 1e-9);
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "equation oracles", 5.0, criterion1},
      {2, "randomized-response truth frequency", 2.0, criterion2},
      {3, "neighborhood reuse reduces vulnerable users", 60.0, criterion3},
      {4, "accuracy-privacy MAE ordering", 120.0, criterion4},
      {5, "decay exponent recovery", 10.0, criterion5},
      {6, "popularity-bias correlation shape", 60.0, criterion6},
      {7, "low-popularity group has higher MAE", 120.0, criterion7},
      {8, "attribution integrity", 1.0, criterion8},
      {9, "fairness-simulation trade-off", 120.0, criterion9},
      {10, "statistical-parity worked example", 1.0, criterion10},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.budget_s) {
      ok = false;
      detail += " [over time budget]";
    }
    std::printf("%s criterion %d: %s — %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.id,
                c.name, detail.c_str(), elapsed);
    failures += !ok;
  }
  if (failures) std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
