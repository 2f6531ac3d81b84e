#ifndef SOCIOLINK_EVAL_H_
#define SOCIOLINK_EVAL_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sociolink/corpus.h"

namespace sociolink {

struct Link {
  TokenSpan span;
  EntityId entity;

  bool operator==(const Link &) const = default;
};

// Linker output for one message.
struct TweetLinks {
  std::string id;
  std::vector<Link> links;

  bool operator==(const TweetLinks &) const = default;
};

struct Counts {
  std::int64_t predicted = 0;
  std::int64_t gold = 0;
  std::int64_t correct = 0;

  Counts &operator+=(const Counts &o) {
    predicted += o.predicted;
    gold += o.gold;
    correct += o.correct;
    return *this;
  }
  bool operator==(const Counts &) const = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// A prediction is correct when it names the same entity as a still-unmatched
// gold item whose span intersects it. Predictions are visited in start order
// and take the first such gold item (gold also in start order). Throws
// DataError if predictions overlap each other.
Counts MatchAndCount(const std::vector<Link> &predicted,
                     const std::vector<Link> &gold);

// Same correctness rule with a maximum bipartite matching; used to audit the
// greedy matcher.
Counts MatchAndCountOptimal(const std::vector<Link> &predicted,
                            const std::vector<Link> &gold);

Prf ComputePrf(const Counts &counts);

std::vector<Link> GoldLinks(const Tweet &tweet);

// Micro-averaged result over a tweet set; per-tweet counts kept for
// resampling.
struct LinkingResult {
  std::vector<std::string> ids;
  std::vector<Counts> per_tweet;
  Counts total;
  // Tweets where greedy and optimal matching disagree.
  std::vector<std::string> matching_discrepancies;

  Prf prf() const { return ComputePrf(total); }
};

// Pairs predictions with gold by tweet id. Tweets with no prediction record
// count as empty output. Throws DataError for prediction ids absent from the
// gold set or repeated.
LinkingResult Evaluate(const std::vector<Tweet> &gold,
                       const std::vector<TweetLinks> &predicted);

struct BootstrapResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
  // (F1 of A, F1 of B) per resample.
  std::vector<std::pair<double, double>> f1_pairs;
};

// Resamples tweets with replacement (indices shared by both systems),
// computes F1 per resample, and applies a two-tailed paired t-test to the
// differences with n_samples - 1 degrees of freedom. All-zero differences
// give t = 0, p = 1. Throws DataError if the tweet sets differ.
BootstrapResult BootstrapCompare(const LinkingResult &a, const LinkingResult &b,
                                 int n_samples = 100, std::uint64_t seed = 1);

// One JSON object per line: {"id": "...", "links": [[start, end, "E"], ...]}.
std::vector<TweetLinks> LoadLinks(const std::string &path);
void SaveLinks(const std::vector<TweetLinks> &links, const std::string &path);
std::string FormatLinks(const TweetLinks &links);

}  // namespace sociolink

#endif  // SOCIOLINK_EVAL_H_
