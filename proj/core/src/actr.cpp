#include "reckit/actr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reckit::actr {

namespace {

std::vector<std::string> event_units(const corpus::ItemMeta& meta,
                                     const std::string& item, UnitKind kind) {
  if (kind == UnitKind::Track) return {item};
  return {meta.genres.begin(), meta.genres.end()};
}

void validate_weights(const ComponentWeights& w) {
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0) throw std::invalid_argument("component weights must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("component weights must sum to 1");
}

}  // namespace

ActrModel ActrModel::train(const corpus::InteractionLog& log, UnitKind kind,
                           ActrConfig cfg) {
  if (!(cfg.decay > 0.0)) throw std::invalid_argument("decay exponent must be > 0");
  if (!(cfg.t_floor > 0.0)) throw std::invalid_argument("t_floor must be > 0");
  validate_weights(cfg.weights);

  ActrModel m;
  m.cfg_ = cfg;
  m.kind_ = kind;
  m.item_meta_ = log.item_meta();

  std::map<std::pair<std::string, std::string>, double> social_counts;
  for (const auto& e : log.events()) {
    const auto& meta = m.item_meta_.at(e.item);
    const auto units = event_units(meta, e.item, kind);
    const double ts = static_cast<double>(e.timestamp);
    for (const auto& unit : units) {
      m.histories_[{e.user, unit}].push_back(ts);
      social_counts[{e.user, unit}] += 1.0;
    }
    for (const auto& g : meta.genres) {
      ++m.context_occ_[g];
      for (const auto& unit : units) ++m.context_cooc_[{g, unit}];
    }
    auto [it, inserted] = m.latest_event_.try_emplace(e.user, ts, e.item);
    if (!inserted && ts >= it->second.first) it->second = {ts, e.item};
    if (meta.artist)
      m.artist_genres_[*meta.artist].insert(meta.genres.begin(), meta.genres.end());
  }
  for (auto& [key, h] : m.histories_) std::sort(h.begin(), h.end());

  std::vector<std::tuple<std::string, std::string, double>> cells;
  cells.reserve(social_counts.size());
  for (const auto& [key, c] : social_counts)
    cells.emplace_back(key.first, key.second, c);
  m.social_matrix_ = neighbors::RatingMatrix::from_cells(cells);
  m.social_knn_.emplace(m.social_matrix_, neighbors::SimilarityConfig::cosine());
  return m;
}

std::vector<std::string> ActrModel::units() const {
  std::set<std::string> s;
  for (const auto& [key, h] : histories_) s.insert(key.second);
  return {s.begin(), s.end()};
}

std::optional<double> ActrModel::bll_score(const std::string& user,
                                           const std::string& unit, double now) const {
  auto it = histories_.find({user, unit});
  if (it == histories_.end()) return std::nullopt;
  double sum = 0.0;
  std::size_t n = 0;
  for (double ts : it->second) {
    if (ts >= now) break;
    const double t = std::max((now - ts) / cfg_.time_unit_seconds, cfg_.t_floor);
    sum += std::pow(t, -cfg_.decay);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return std::log(sum);
}

double ActrModel::associative_activation(const std::string& unit,
                                         const std::vector<std::string>& context) const {
  if (context.empty()) return 0.0;
  const double w = 1.0 / static_cast<double>(context.size());
  double sum = 0.0;
  for (const auto& j : context) {
    auto occ = context_occ_.find(j);
    if (occ == context_occ_.end() || occ->second == 0) continue;
    auto cooc = context_cooc_.find({j, unit});
    if (cooc == context_cooc_.end()) continue;
    const double s = std::log(1.0 + static_cast<double>(cooc->second) /
                                        static_cast<double>(occ->second));
    sum += w * s;
  }
  return sum;
}

std::optional<double> ActrModel::activation_score(const std::string& user,
                                                  const std::string& unit,
                                                  const std::vector<std::string>& context,
                                                  double now) const {
  const auto bll = bll_score(user, unit, now);
  if (!bll) return std::nullopt;
  return *bll + associative_activation(unit, context);
}

std::size_t ActrModel::occurrence_count(const std::string& user,
                                        const std::string& unit) const {
  auto it = histories_.find({user, unit});
  return it == histories_.end() ? 0 : it->second.size();
}

double ActrModel::valuation_score(const std::string& user, const std::string& unit) const {
  return std::log(1.0 + static_cast<double>(occurrence_count(user, unit)));
}

std::optional<double> ActrModel::social_score(const std::string& user,
                                              const std::string& unit) const {
  if (!social_knn_) return std::nullopt;
  const auto hood = social_knn_->top_k_neighbors(user, unit, cfg_.social_k);
  return social_knn_->predict_rating(hood);
}

std::vector<std::string> ActrModel::default_context(const std::string& user) const {
  auto it = latest_event_.find(user);
  if (it == latest_event_.end()) return {};
  const auto& item = it->second.second;
  const auto& meta = item_meta_.at(item);
  if (meta.artist) {
    auto ag = artist_genres_.find(*meta.artist);
    if (ag != artist_genres_.end()) return {ag->second.begin(), ag->second.end()};
  }
  return {meta.genres.begin(), meta.genres.end()};
}

namespace {

// Min-max over the present values; absent scores normalize to 0, a degenerate
// range to 0.5.
std::vector<double> normalize_component(const std::vector<std::optional<double>>& raw) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& v : raw) {
    if (!v) continue;
    if (!any) {
      lo = hi = *v;
      any = true;
    } else {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  std::vector<double> out(raw.size(), 0.0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i]) continue;
    out[i] = (hi > lo) ? (*raw[i] - lo) / (hi - lo) : 0.5;
  }
  return out;
}

}  // namespace

std::vector<RankedUnit> ActrModel::rank_units(const std::string& user,
                                              const std::vector<std::string>& candidates,
                                              const std::vector<std::string>& context,
                                              double now,
                                              const ComponentWeights& weights) const {
  if (candidates.empty()) throw std::invalid_argument("empty candidate set");
  validate_weights(weights);

  const std::size_t n = candidates.size();
  std::array<std::vector<std::optional<double>>, 4> raw;
  for (auto& r : raw) r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[0][i] = bll_score(user, candidates[i], now);
    raw[1][i] = associative_activation(candidates[i], context);
    raw[2][i] = valuation_score(user, candidates[i]);
    raw[3][i] = social_score(user, candidates[i]);
  }
  std::array<std::vector<double>, 4> norm;
  for (std::size_t c = 0; c < 4; ++c) norm[c] = normalize_component(raw[c]);

  std::vector<RankedUnit> ranked(n);
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    for (std::size_t c = 0; c < 4; ++c) score += weights[c] * norm[c][i];
    ranked[i] = {candidates[i], score};
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedUnit& a, const RankedUnit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.unit < b.unit;
  });
  return ranked;
}

AttributionMatrix ActrModel::attribute_components(const std::string& user,
                                                  const std::vector<std::string>& recs,
                                                  const std::vector<std::string>& context,
                                                  double now) const {
  const std::size_t n = recs.size();
  std::array<std::vector<std::optional<double>>, 4> raw;
  for (auto& r : raw) r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[0][i] = bll_score(user, recs[i], now);
    raw[1][i] = associative_activation(recs[i], context);
    raw[2][i] = valuation_score(user, recs[i]);
    raw[3][i] = social_score(user, recs[i]);
  }
  std::array<std::vector<double>, 4> norm;
  for (std::size_t c = 0; c < 4; ++c) norm[c] = normalize_component(raw[c]);

  AttributionMatrix out;
  out.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    AttributionRow& row = out.rows[i];
    row.unit = recs[i];
    double sum = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      row.share[c] = cfg_.weights[c] * norm[c][i];
      sum += row.share[c];
    }
    if (sum <= 0.0) {
      row.share = {0.25, 0.25, 0.25, 0.25};
      row.flagged_uniform = true;
    } else {
      for (auto& s : row.share) s /= sum;
    }
  }
  return out;
}

double fit_decay_from_gaps(const std::vector<double>& gaps_in_units, std::size_t n_bins) {
  std::vector<double> gaps;
  for (double g : gaps_in_units)
    if (g > 0.0) gaps.push_back(g);
  if (gaps.size() < 3)
    throw std::invalid_argument("too few re-consumption gaps; use a fixed decay d");

  const auto [lo_it, hi_it] = std::minmax_element(gaps.begin(), gaps.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo))
    throw std::invalid_argument("degenerate gap distribution; use a fixed decay d");

  const double ratio = hi / lo;
  std::vector<std::size_t> counts(n_bins, 0);
  for (double g : gaps) {
    auto bin = static_cast<std::size_t>(std::log(g / lo) / std::log(ratio) *
                                        static_cast<double>(n_bins));
    if (bin >= n_bins) bin = n_bins - 1;
    ++counts[bin];
  }

  // Density per bin (count over bin width), fitted on log-log axes.
  std::vector<double> xs, ys;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (counts[b] == 0) continue;
    const double left = lo * std::pow(ratio, static_cast<double>(b) / n_bins);
    const double right = lo * std::pow(ratio, static_cast<double>(b + 1) / n_bins);
    const double center = std::sqrt(left * right);
    xs.push_back(std::log(center));
    ys.push_back(std::log(static_cast<double>(counts[b]) / (right - left)));
  }
  if (xs.size() < 3)
    throw std::invalid_argument("fewer than 3 populated bins; use a fixed decay d");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return -(sxy / sxx);
}

double fit_decay_exponent(const corpus::InteractionLog& log, UnitKind kind,
                          double time_unit_seconds) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> histories;
  for (const auto& e : log.events()) {
    const auto& meta = log.item_meta().at(e.item);
    for (const auto& unit : event_units(meta, e.item, kind))
      histories[{e.user, unit}].push_back(static_cast<double>(e.timestamp));
  }
  std::vector<double> gaps;
  for (auto& [key, h] : histories) {
    std::sort(h.begin(), h.end());
    for (std::size_t i = 1; i < h.size(); ++i)
      gaps.push_back((h[i] - h[i - 1]) / time_unit_seconds);
  }
  return fit_decay_from_gaps(gaps);
}

void write_attribution_csv(std::ostream& out, const std::string& user,
                           const AttributionMatrix& matrix) {
  out << "user,item,bll,s,v,sc\n";
  for (const auto& row : matrix.rows) {
    out << user << ',' << row.unit;
    for (double s : row.share) out << ',' << s;
    out << '\n';
  }
}

}  // namespace reckit::actr
