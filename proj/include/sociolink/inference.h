#ifndef SOCIOLINK_INFERENCE_H_
#define SOCIOLINK_INFERENCE_H_

#include <optional>
#include <vector>

#include "sociolink/corpus.h"
#include "sociolink/scorer.h"

namespace sociolink {

// Per-candidate local scores g(x, y_t, u, t): one for Nil and one per entity
// candidate in lexicon order. Decoding only ever needs these numbers.
struct CandidateScores {
  double nil = 0.0;
  std::vector<double> entities;
};
using ScoreTable = std::vector<CandidateScores>;

struct Decoded {
  Assignment assignment;
  double score = 0.0;
};

// DP chart of the non-overlapping decoder.
struct Chart {
  std::vector<double> best_prefix;    // a(t)
  std::vector<int> best_entity;       // argmax non-Nil label per candidate
  std::vector<int> prev;              // prev(t), -1 for none
  std::vector<bool> takes_entity;     // backpointer: psi(entity) > psi(Nil)
};

ScoreTable ComputeScores(const Model &model, const Tweet &tweet,
                         const std::vector<MentionCandidate> &candidates,
                         const UserId &user);

// Adds weight * [y_t != gold_t] to every local score.
void AddHammingLoss(ScoreTable &scores, const Assignment &gold, double weight);

// Sum of table entries selected by the assignment.
double TableScore(const ScoreTable &scores, const Assignment &assignment);

// Largest t' < t with end(t') <= start(t). `spans` must be sorted by
// (end, start).
std::optional<int> PrevIndex(const std::vector<TokenSpan> &spans, int t);
std::optional<int> PrevIndex(const std::vector<MentionCandidate> &candidates,
                             int t);

std::vector<TokenSpan> SpansOf(const std::vector<MentionCandidate> &candidates);

// True when no two non-Nil labels sit on overlapping spans.
bool IsValidAssignment(const std::vector<TokenSpan> &spans,
                       const Assignment &assignment);

Chart BuildChart(const std::vector<TokenSpan> &spans, const ScoreTable &scores);

// Exact argmax over valid assignments of the table score. Ties go to Nil,
// then to the lowest entity index, settled from the last candidate
// backwards.
Decoded DecodeTable(const std::vector<TokenSpan> &spans,
                    const ScoreTable &scores);

// Enumerates every label vector. Throws std::length_error when the search
// space exceeds kMaxBruteForce.
inline constexpr double kMaxBruteForce = 1e6;
Decoded BruteForceTable(const std::vector<TokenSpan> &spans,
                        const ScoreTable &scores);

Decoded Decode(const Model &model, const Tweet &tweet,
               const std::vector<MentionCandidate> &candidates,
               const UserId &user);

// argmax over valid y of hamming_weight * #{t : y_t != gold_t} + s(y).
Decoded DecodeLossAugmented(const Model &model, const Tweet &tweet,
                            const std::vector<MentionCandidate> &candidates,
                            const UserId &user, const Assignment &gold,
                            double hamming_weight);

// Oracle counterpart of Decode / DecodeLossAugmented (when gold is given).
Decoded BruteForceDecode(const Model &model, const Tweet &tweet,
                         const std::vector<MentionCandidate> &candidates,
                         const UserId &user,
                         const Assignment *gold = nullptr,
                         double hamming_weight = 0.0);

}  // namespace sociolink

#endif  // SOCIOLINK_INFERENCE_H_
