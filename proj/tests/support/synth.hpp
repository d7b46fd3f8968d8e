#ifndef RECKIT_TESTS_SUPPORT_SYNTH_HPP_
#define RECKIT_TESTS_SUPPORT_SYNTH_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "reckit/corpus.hpp"
#include "reckit/rng.hpp"

namespace synth {

struct SynthSpec {
  std::size_t n_users = 200;
  std::size_t n_items = 500;
  std::size_t events_per_user = 40;
  double zipf_exponent = 1.0;   // item popularity ~ 1/rank^exponent
  double noise_sd = 0.6;
  std::size_t n_genres = 12;
  std::uint64_t seed = 1;
  // Optional saturated head: the first `head_items` ranks are each consumed
  // independently by a `head_rate` fraction of users, giving the popularity
  // curve a flat blockbuster plateau before the Zipf tail. 0 disables it.
  std::size_t head_items = 0;
  double head_rate = 0.5;
};

inline std::string user_id(std::size_t u) { return "u" + std::to_string(u); }
inline std::string item_id(std::size_t i) { return "i" + std::to_string(i); }

/// Long-tail interaction log. Each user has a mainstreaminess level p_u in
/// [0, 1]: with probability p_u they pick items Zipf-weighted toward the
/// popular head, otherwise uniformly. Item quality v_i falls with rank, and
/// ratings are clamp(round(3 + p_u * v_i + noise), 1..5) so that
/// mainstream users genuinely prefer mainstream items. Timestamps strictly
/// increase, so chronological splits are well defined.
inline reckit::corpus::InteractionLog long_tail_log(const SynthSpec& spec) {
  reckit::Rng rng(spec.seed);

  // Zipf CDF over the item ranks past the plateau head.
  const std::size_t head = std::min(spec.head_items, spec.n_items);
  const std::size_t n_tail = spec.n_items - head;
  std::vector<double> cdf(n_tail);
  double total = 0.0;
  for (std::size_t i = 0; i < n_tail; ++i) {
    total += 1.0 / std::pow(static_cast<double>(i + 1), spec.zipf_exponent);
    cdf[i] = total;
  }
  for (auto& c : cdf) c /= total;

  const auto draw_zipf = [&]() -> std::size_t {
    const double x = rng.uniform();
    return head + static_cast<std::size_t>(
                      std::lower_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
  };

  std::map<std::string, reckit::corpus::ItemMeta> meta;
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    reckit::corpus::ItemMeta m;
    m.genres = {"g" + std::to_string(i % spec.n_genres)};
    m.artist = "a" + std::to_string(i % (spec.n_items / 10 + 1));
    meta[item_id(i)] = m;
  }

  std::vector<reckit::corpus::Interaction> events;
  std::int64_t ts = 1000;
  for (std::size_t u = 0; u < spec.n_users; ++u) {
    const double mainstream = rng.uniform();  // p_u
    std::set<std::size_t> seen;
    const auto emit = [&](std::size_t item) {
      // Popular-head items have higher quality for mainstream listeners.
      const double quality =
          1.5 * (1.0 - static_cast<double>(item) / static_cast<double>(spec.n_items));
      const double value = std::clamp(
          std::round(3.0 + mainstream * quality - 0.75 +
                     rng.gaussian(0.0, spec.noise_sd)),
          1.0, 5.0);
      ts += 10 + static_cast<std::int64_t>(rng.uniform_int(50));
      events.push_back({user_id(u), item_id(item), value, ts});
    };
    for (std::size_t i = 0; i < head; ++i)
      if (rng.bernoulli(spec.head_rate)) {
        seen.insert(i);
        emit(i);
      }
    std::size_t attempts = 0;
    const std::size_t target = seen.size() + spec.events_per_user;
    while (seen.size() < target && attempts < spec.events_per_user * 20) {
      ++attempts;
      const std::size_t item = rng.bernoulli(mainstream)
                                   ? draw_zipf()
                                   : head + rng.uniform_int(n_tail);
      if (!seen.insert(item).second) continue;
      emit(item);
    }
  }
  return reckit::corpus::InteractionLog(std::move(events), std::move(meta), {1.0, 5.0});
}

/// Re-listening gaps drawn from a power-law density p(g) ~ g^-d on
/// [lo, hi], via inverse-CDF sampling. Used to validate the decay fit.
inline std::vector<double> power_law_gaps(double d, std::size_t n, std::uint64_t seed,
                                          double lo = 1.0, double hi = 1e4) {
  reckit::Rng rng(seed);
  std::vector<double> gaps(n);
  const double a = 1.0 - d;  // integral exponent, d != 1
  const double lo_a = std::pow(lo, a);
  const double hi_a = std::pow(hi, a);
  for (auto& g : gaps) {
    const double u = rng.uniform();
    g = std::pow(lo_a + u * (hi_a - lo_a), 1.0 / a);
  }
  return gaps;
}

}  // namespace synth

#endif  // RECKIT_TESTS_SUPPORT_SYNTH_HPP_
