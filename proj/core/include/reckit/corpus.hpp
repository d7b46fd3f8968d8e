#ifndef RECKIT_CORPUS_HPP_
#define RECKIT_CORPUS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace reckit::corpus {

struct Interaction {
  std::string user;
  std::string item;
  double value = 0.0;
  std::int64_t timestamp = 0;  // seconds since epoch
};

struct ItemMeta {
  std::set<std::string> genres;
  std::optional<std::string> artist;
};

struct RatingRange {
  double min = 1.0;
  double max = 5.0;
};

/// Timestamped interaction events plus item metadata. Immutable after
/// construction; safe to share read-only across threads.
class InteractionLog {
 public:
  InteractionLog(std::vector<Interaction> events,
                 std::map<std::string, ItemMeta> item_meta, RatingRange range);

  const std::vector<Interaction>& events() const { return events_; }
  const std::map<std::string, ItemMeta>& item_meta() const { return item_meta_; }
  RatingRange rating_range() const { return range_; }

  /// Sorted distinct ids.
  std::vector<std::string> users() const;
  std::vector<std::string> items() const;

 private:
  std::vector<Interaction> events_;
  std::map<std::string, ItemMeta> item_meta_;
  RatingRange range_;
};

struct SplitPair {
  InteractionLog train;
  InteractionLog test;
};

enum class GroupScheme { TercilePopularity, MsBeyms };

struct UserGroupAssignment {
  std::map<std::string, std::string> groups;
  GroupScheme scheme = GroupScheme::TercilePopularity;
};

struct IngestSchema {
  std::string user_column = "user";
  std::string item_column = "item";
  std::string value_column = "value";
  std::string timestamp_column = "ts";
  RatingRange rating_range;
};

struct IngestResult {
  InteractionLog log;
  std::size_t malformed_rows = 0;
  std::vector<std::string> warnings;  // one entry per malformed row
};

/// Reads an interaction CSV with a header line. Unparseable rows and
/// duplicate (user,item,timestamp) triples are counted and reported in the
/// result; a value outside the declared rating range aborts with an error
/// that names the offending row.
IngestResult ingest_interactions(const std::string& path,
                                 const IngestSchema& schema);

/// Reads item metadata CSV `item,genres,artist` with `|`-separated genres.
std::map<std::string, ItemMeta> load_item_meta(const std::string& path);

enum class PopularityMode { DistinctUsers, EventFraction };

/// popularity(i) = |distinct users who interacted with i| / |distinct users|
/// (DistinctUsers mode). Items that appear only in item_meta get 0.
std::map<std::string, double> item_popularity(
    const InteractionLog& log,
    PopularityMode mode = PopularityMode::DistinctUsers);

/// Per user, the earliest ceil(fraction * n) events go to train, the rest to
/// test. Events are ordered by (timestamp, item id).
SplitPair chronological_split(const InteractionLog& log, double train_fraction);

struct GroupOptions {
  double beyms_quantile = 0.2;
  bool median_mainstreaminess = false;  // mean is the default aggregation
};

/// User mainstreaminess = mean (or median) popularity of the user's distinct
/// items. Tercile scheme labels LowPop/MedPop/HighPop; ms-beyms labels the
/// bottom quantile BeyMS and the rest MS. Ties break by user id.
UserGroupAssignment assign_popularity_groups(const InteractionLog& log,
                                             GroupScheme scheme,
                                             const GroupOptions& opts = {});

/// Mainstreaminess values used by assign_popularity_groups, exposed for
/// reporting.
std::map<std::string, double> user_mainstreaminess(const InteractionLog& log,
                                                   const GroupOptions& opts = {});

}  // namespace reckit::corpus

#endif  // RECKIT_CORPUS_HPP_
