#ifndef RECKIT_PRIVACY_HPP_
#define RECKIT_PRIVACY_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reckit/corpus.hpp"
#include "reckit/neighbors.hpp"
#include "reckit/rng.hpp"

namespace reckit::privacy {

/// Two-coin randomized response over a discrete rating support: the first
/// fair coin decides between the real rating and a second fair coin, which
/// decides between the real rating and a uniform draw over the m levels.
struct DpMechanism {
  corpus::RatingRange rating_range;
  std::size_t levels = 5;  // m >= 2
  std::uint64_t seed = 0;
  bool truth_only = false;  // test hook: forces the truth branch

  double level_value(std::size_t idx) const {
    return rating_range.min +
           (rating_range.max - rating_range.min) * static_cast<double>(idx) /
               static_cast<double>(levels - 1);
  }
};

enum class RrBranch { Truth, Uniform };

struct RrOutcome {
  double value = 0.0;
  RrBranch branch = RrBranch::Truth;
};

/// Like randomized_response but reports which branch produced the output.
RrOutcome randomized_response_tagged(double rating, const DpMechanism& mech, Rng& rng);

double randomized_response(double rating, const DpMechanism& mech, Rng& rng);

/// Perturbed ratings of the item, order-aligned with hood.members.
std::vector<double> dp_rating_set(const neighbors::Neighborhood& hood,
                                  const DpMechanism& mech, Rng& rng,
                                  const neighbors::RatingMatrix& train);

inline constexpr std::uint64_t kTauInfinity = std::numeric_limits<std::uint64_t>::max();

struct UserPartition {
  std::vector<std::string> secure;      // usage <= tau
  std::vector<std::string> vulnerable;  // usage > tau
};

/// Per-user count of times served as a neighbor. Counts only grow. Mutating
/// calls must be externally serialized.
class UsageLedger {
 public:
  explicit UsageLedger(std::uint64_t tau) : tau_(tau) {}

  std::uint64_t tau() const { return tau_; }
  void record(const std::string& user) { ++usage_[user]; }
  std::uint64_t usage(const std::string& user) const;
  const std::map<std::string, std::uint64_t>& counts() const { return usage_; }
  bool vulnerable(const std::string& user) const { return usage(user) > tau_; }

  /// Splits all users ever recorded (plus the given universe) at tau.
  UserPartition classify(const std::vector<std::string>& universe = {}) const;

  /// CSV `user,usage,secure` for audit.
  void write_csv(std::ostream& out, const std::vector<std::string>& universe = {}) const;

 private:
  std::map<std::string, std::uint64_t> usage_;
  std::uint64_t tau_;
};

/// Neighborhood reuse on top of UserKnn: candidates already used for the same
/// target user outrank fresh ones, then similarity, then id. Every selection
/// is recorded in the ledger. Per-user reuse state makes queries stateful, so
/// callers must serialize access.
class ReuseKnn {
 public:
  ReuseKnn(const neighbors::UserKnn& base, std::uint64_t tau)
      : base_(base), ledger_(tau) {}

  neighbors::Neighborhood neighborhood(const std::string& user, const std::string& item,
                                       std::size_t k);

  /// ReuseKNN prediction with DP applied to vulnerable members only: their
  /// ratings pass through randomized response, secure members' real ratings
  /// are used as-is.
  std::optional<double> dp_predict(const std::string& user, const std::string& item,
                                   std::size_t k, const DpMechanism& mech, Rng& rng);

  UsageLedger& ledger() { return ledger_; }
  const UsageLedger& ledger() const { return ledger_; }
  const neighbors::UserKnn& base() const { return base_; }

 private:
  const neighbors::UserKnn& base_;
  UsageLedger ledger_;
  std::unordered_map<std::string, std::unordered_set<std::string>> used_for_;
};

/// Fully differentially-private UserKNN prediction: plain top-k neighborhood,
/// every neighbor rating perturbed.
std::optional<double> dp_predict_full(const neighbors::UserKnn& knn,
                                      const std::string& user, const std::string& item,
                                      std::size_t k, const DpMechanism& mech, Rng& rng);

}  // namespace reckit::privacy

#endif  // RECKIT_PRIVACY_HPP_
