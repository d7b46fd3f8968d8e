#include <benchmark/benchmark.h>

#include <vector>

#include "reckit/actr.hpp"
#include "reckit/corpus.hpp"
#include "reckit/neighbors.hpp"
#include "reckit/rng.hpp"
#include "reckit/trust.hpp"

namespace {

using namespace reckit;

corpus::InteractionLog synth_log(std::size_t n_users, std::size_t n_items,
                                 std::size_t events_per_user) {
  Rng rng(7);
  std::vector<corpus::Interaction> events;
  std::map<std::string, corpus::ItemMeta> meta;
  for (std::size_t i = 0; i < n_items; ++i)
    meta["i" + std::to_string(i)] = {{"g" + std::to_string(i % 12)}, std::nullopt};
  std::int64_t ts = 0;
  for (std::size_t u = 0; u < n_users; ++u) {
    std::set<std::size_t> seen;
    for (std::size_t e = 0; e < events_per_user; ++e) {
      // Zipf-ish long tail: squaring a uniform biases toward low item ids.
      const double x = rng.uniform();
      const auto item = static_cast<std::size_t>(x * x * static_cast<double>(n_items));
      if (!seen.insert(item).second) continue;
      events.push_back({"u" + std::to_string(u), "i" + std::to_string(item),
                        1.0 + std::floor(rng.uniform() * 5.0), ++ts});
    }
  }
  return corpus::InteractionLog(std::move(events), std::move(meta), {1.0, 5.0});
}

void BM_UserKnnBuild(benchmark::State& state) {
  const auto log = synth_log(static_cast<std::size_t>(state.range(0)), 400, 40);
  const auto matrix = neighbors::RatingMatrix::from_log(log);
  for (auto _ : state) {
    neighbors::UserKnn knn(matrix, neighbors::SimilarityConfig::cosine());
    benchmark::DoNotOptimize(knn);
  }
}
BENCHMARK(BM_UserKnnBuild)->Arg(100)->Arg(200)->Arg(400);

void BM_UserKnnPredict(benchmark::State& state) {
  const auto log = synth_log(200, 400, 40);
  const neighbors::UserKnn knn(neighbors::RatingMatrix::from_log(log),
                               neighbors::SimilarityConfig::cosine());
  const auto& m = knn.matrix();
  std::size_t q = 0;
  for (auto _ : state) {
    const auto& user = m.user_ids()[q % m.n_users()];
    const auto& item = m.item_ids()[(q * 13) % m.n_items()];
    benchmark::DoNotOptimize(knn.predict(user, item, 10));
    ++q;
  }
}
BENCHMARK(BM_UserKnnPredict);

void BM_BllScore(benchmark::State& state) {
  const auto log = synth_log(100, 200, 60);
  const auto model = actr::ActrModel::train(log, actr::UnitKind::Track, {});
  const auto units = model.units();
  double now = 1e9;
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        model.bll_score("u" + std::to_string(q % 100), units[q % units.size()], now));
    ++q;
  }
}
BENCHMARK(BM_BllScore);

void BM_KatzTruncated(benchmark::State& state) {
  Rng rng(11);
  std::vector<std::pair<std::string, std::string>> edges;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t e = 0; e < n * 4; ++e)
    edges.emplace_back("n" + std::to_string(rng.uniform_int(n)),
                       "n" + std::to_string(rng.uniform_int(n)));
  const auto g = trust::TrustGraph::from_edges(edges, 0.05, 4);
  for (auto _ : state) benchmark::DoNotOptimize(trust::katz_similarity(g));
}
BENCHMARK(BM_KatzTruncated)->Arg(50)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
