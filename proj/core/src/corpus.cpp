#include "reckit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "reckit/csv.hpp"

namespace reckit::corpus {

InteractionLog::InteractionLog(std::vector<Interaction> events,
                               std::map<std::string, ItemMeta> item_meta,
                               RatingRange range)
    : events_(std::move(events)), item_meta_(std::move(item_meta)), range_(range) {
  if (!(range_.min < range_.max))
    throw std::invalid_argument("rating_range.min must be < rating_range.max");
  std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
  for (const auto& e : events_) {
    if (e.timestamp < 0)
      throw std::invalid_argument("negative timestamp for user " + e.user);
    if (!seen.emplace(e.user, e.item, e.timestamp).second)
      throw std::invalid_argument("duplicate (user,item,timestamp) triple: " +
                                  e.user + "," + e.item);
    // Auto-register items missing from the metadata map.
    item_meta_.try_emplace(e.item);
  }
}

std::vector<std::string> InteractionLog::users() const {
  std::set<std::string> s;
  for (const auto& e : events_) s.insert(e.user);
  return {s.begin(), s.end()};
}

std::vector<std::string> InteractionLog::items() const {
  std::set<std::string> s;
  for (const auto& e : events_) s.insert(e.item);
  return {s.begin(), s.end()};
}

IngestResult ingest_interactions(const std::string& path,
                                 const IngestSchema& schema) {
  const csv::Table table = csv::read_file(path);
  const int cu = table.column(schema.user_column);
  const int ci = table.column(schema.item_column);
  const int cv = table.column(schema.value_column);
  const int ct = table.column(schema.timestamp_column);
  for (const auto& [col, name] :
       {std::pair{cu, schema.user_column}, {ci, schema.item_column},
        {cv, schema.value_column}, {ct, schema.timestamp_column}}) {
    if (col < 0)
      throw std::runtime_error("missing required column '" + name + "' in " + path);
  }

  std::vector<Interaction> events;
  std::size_t malformed = 0;
  std::vector<std::string> warnings;
  std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
  const std::size_t width =
      static_cast<std::size_t>(std::max({cu, ci, cv, ct})) + 1;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line_no = r + 2;  // 1-based, after the header
    if (row.size() < width) {
      ++malformed;
      warnings.push_back("row " + std::to_string(line_no) + ": too few columns");
      continue;
    }
    Interaction e;
    e.user = row[cu];
    e.item = row[ci];
    try {
      e.value = std::stod(row[cv]);
      e.timestamp = std::stoll(row[ct]);
    } catch (const std::exception&) {
      ++malformed;
      warnings.push_back("row " + std::to_string(line_no) + ": unparseable number");
      continue;
    }
    if (e.timestamp < 0) {
      ++malformed;
      warnings.push_back("row " + std::to_string(line_no) + ": negative timestamp");
      continue;
    }
    if (e.value < schema.rating_range.min || e.value > schema.rating_range.max)
      throw std::runtime_error("row " + std::to_string(line_no) + ": value " +
                               std::to_string(e.value) +
                               " outside declared rating range");
    if (!seen.emplace(e.user, e.item, e.timestamp).second) {
      ++malformed;
      warnings.push_back("row " + std::to_string(line_no) +
                         ": duplicate (user,item,timestamp)");
      continue;
    }
    events.push_back(std::move(e));
  }

  InteractionLog log(std::move(events), {}, schema.rating_range);
  return IngestResult{std::move(log), malformed, std::move(warnings)};
}

std::map<std::string, ItemMeta> load_item_meta(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  const int ci = table.column("item");
  const int cg = table.column("genres");
  const int ca = table.column("artist");
  if (ci < 0 || cg < 0)
    throw std::runtime_error("item metadata needs 'item' and 'genres' columns");
  std::map<std::string, ItemMeta> meta;
  for (const auto& row : table.rows) {
    if (row.size() <= static_cast<std::size_t>(std::max(ci, cg))) continue;
    ItemMeta m;
    for (const auto& g : csv::split(row[cg], '|'))
      if (!g.empty()) m.genres.insert(g);
    if (ca >= 0 && row.size() > static_cast<std::size_t>(ca) && !row[ca].empty())
      m.artist = row[ca];
    meta[row[ci]] = std::move(m);
  }
  return meta;
}

std::map<std::string, double> item_popularity(const InteractionLog& log,
                                              PopularityMode mode) {
  if (log.events().empty()) throw std::invalid_argument("empty interaction log");
  std::map<std::string, double> pop;
  for (const auto& [item, meta] : log.item_meta()) pop[item] = 0.0;

  if (mode == PopularityMode::DistinctUsers) {
    std::map<std::string, std::set<std::string>> raters;
    std::set<std::string> users;
    for (const auto& e : log.events()) {
      raters[e.item].insert(e.user);
      users.insert(e.user);
    }
    const double n = static_cast<double>(users.size());
    for (const auto& [item, r] : raters) pop[item] = r.size() / n;
  } else {
    std::map<std::string, std::size_t> counts;
    for (const auto& e : log.events()) ++counts[e.item];
    const double n = static_cast<double>(log.events().size());
    for (const auto& [item, c] : counts) pop[item] = c / n;
  }
  return pop;
}

SplitPair chronological_split(const InteractionLog& log, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must be in (0,1)");

  std::map<std::string, std::vector<Interaction>> per_user;
  for (const auto& e : log.events()) per_user[e.user].push_back(e);

  std::vector<Interaction> train, test;
  for (auto& [user, evs] : per_user) {
    std::sort(evs.begin(), evs.end(), [](const Interaction& a, const Interaction& b) {
      return std::tie(a.timestamp, a.item) < std::tie(b.timestamp, b.item);
    });
    const std::size_t n_train = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(evs.size())));
    for (std::size_t i = 0; i < evs.size(); ++i)
      (i < n_train ? train : test).push_back(evs[i]);
  }
  return SplitPair{InteractionLog(std::move(train), log.item_meta(), log.rating_range()),
                   InteractionLog(std::move(test), log.item_meta(), log.rating_range())};
}

std::map<std::string, double> user_mainstreaminess(const InteractionLog& log,
                                                   const GroupOptions& opts) {
  const auto pop = item_popularity(log);
  std::map<std::string, std::set<std::string>> user_items;
  for (const auto& e : log.events()) user_items[e.user].insert(e.item);

  std::map<std::string, double> ms;
  for (const auto& [user, items] : user_items) {
    std::vector<double> vals;
    vals.reserve(items.size());
    for (const auto& item : items) vals.push_back(pop.at(item));
    if (opts.median_mainstreaminess) {
      std::sort(vals.begin(), vals.end());
      const std::size_t n = vals.size();
      ms[user] = (n % 2 == 1) ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    } else {
      double sum = 0.0;
      for (double v : vals) sum += v;
      ms[user] = sum / static_cast<double>(vals.size());
    }
  }
  return ms;
}

UserGroupAssignment assign_popularity_groups(const InteractionLog& log,
                                             GroupScheme scheme,
                                             const GroupOptions& opts) {
  const auto ms = user_mainstreaminess(log, opts);
  std::vector<std::pair<double, std::string>> order;
  order.reserve(ms.size());
  for (const auto& [user, v] : ms) order.emplace_back(v, user);
  std::sort(order.begin(), order.end());  // value, then user id

  UserGroupAssignment out;
  out.scheme = scheme;
  const std::size_t n = order.size();
  if (scheme == GroupScheme::TercilePopularity) {
    if (n < 3)
      throw std::invalid_argument("tercile scheme needs at least 3 users");
    const std::size_t base = n / 3;
    const std::size_t rem = n % 3;
    const std::size_t n_low = base + (rem > 0 ? 1 : 0);
    const std::size_t n_med = base + (rem > 1 ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      const char* label = i < n_low ? "LowPop" : (i < n_low + n_med ? "MedPop" : "HighPop");
      out.groups[order[i].second] = label;
    }
  } else {
    const std::size_t n_bey = static_cast<std::size_t>(
        std::floor(opts.beyms_quantile * static_cast<double>(n) + 1e-12));
    for (std::size_t i = 0; i < n; ++i)
      out.groups[order[i].second] = i < n_bey ? "BeyMS" : "MS";
  }
  return out;
}

}  // namespace reckit::corpus
