#include "sociolink/inference.h"

#include <algorithm>
#include <stdexcept>

namespace sociolink {

ScoreTable ComputeScores(const Model &model, const Tweet &tweet,
                         const std::vector<MentionCandidate> &candidates,
                         const UserId &user) {
  ScoreTable scores(candidates.size());
  for (std::size_t t = 0; t < candidates.size(); ++t) {
    const MentionCandidate &c = candidates[t];
    scores[t].nil = ScoreG(model, tweet, c, kNil, user);
    scores[t].entities.resize(c.candidates.size());
    for (std::size_t k = 0; k < c.candidates.size(); ++k) {
      scores[t].entities[k] =
          ScoreG(model, tweet, c, static_cast<int>(k), user);
    }
  }
  return scores;
}

void AddHammingLoss(ScoreTable &scores, const Assignment &gold, double weight) {
  if (gold.size() != scores.size()) {
    throw std::invalid_argument("gold assignment length mismatch");
  }
  for (std::size_t t = 0; t < scores.size(); ++t) {
    const int y = gold.labels[t];
    if (y != kNil) scores[t].nil += weight;
    for (std::size_t k = 0; k < scores[t].entities.size(); ++k) {
      if (static_cast<int>(k) != y) scores[t].entities[k] += weight;
    }
  }
}

double TableScore(const ScoreTable &scores, const Assignment &assignment) {
  if (assignment.size() != scores.size()) {
    throw std::invalid_argument("assignment length mismatch");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    const int y = assignment.labels[t];
    total += y == kNil ? scores[t].nil : scores[t].entities.at(y);
  }
  return total;
}

std::vector<TokenSpan> SpansOf(const std::vector<MentionCandidate> &candidates) {
  std::vector<TokenSpan> spans;
  spans.reserve(candidates.size());
  for (const auto &c : candidates) spans.push_back(c.span);
  return spans;
}

std::optional<int> PrevIndex(const std::vector<TokenSpan> &spans, int t) {
  // Sorted by end, so the first hit scanning backwards is the largest t'.
  for (int k = t - 1; k >= 0; --k) {
    if (spans[k].end <= spans[t].start) return k;
  }
  return std::nullopt;
}

std::optional<int> PrevIndex(const std::vector<MentionCandidate> &candidates,
                             int t) {
  return PrevIndex(SpansOf(candidates), t);
}

bool IsValidAssignment(const std::vector<TokenSpan> &spans,
                       const Assignment &assignment) {
  if (assignment.size() != spans.size()) return false;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (assignment.labels[i] == kNil) continue;
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      if (assignment.labels[j] != kNil && spans[i].Overlaps(spans[j])) {
        return false;
      }
    }
  }
  return true;
}

Chart BuildChart(const std::vector<TokenSpan> &spans, const ScoreTable &scores) {
  if (spans.size() != scores.size()) {
    throw std::invalid_argument("span and score tables differ in length");
  }
  const int n = static_cast<int>(spans.size());
  Chart chart;
  chart.best_prefix.resize(n);
  chart.best_entity.assign(n, kNil);
  chart.prev.assign(n, -1);
  chart.takes_entity.assign(n, false);

  // nil_prefix[k] = sum of Nil scores of candidates [0, k).
  std::vector<double> nil_prefix(n + 1, 0.0);
  for (int t = 0; t < n; ++t) nil_prefix[t + 1] = nil_prefix[t] + scores[t].nil;

  for (int t = 0; t < n; ++t) {
    const auto &ents = scores[t].entities;
    int best = kNil;
    for (int k = 0; k < static_cast<int>(ents.size()); ++k) {
      if (best == kNil || ents[k] > ents[best]) best = k;
    }
    chart.best_entity[t] = best;
    const int prev = PrevIndex(spans, t).value_or(-1);
    chart.prev[t] = prev;

    const double psi_nil =
        scores[t].nil + (t > 0 ? chart.best_prefix[t - 1] : 0.0);
    double psi_entity = psi_nil;
    if (best != kNil) {
      // Candidates strictly between prev(t) and t all overlap t and must be
      // Nil when t takes an entity.
      const double between = nil_prefix[t] - nil_prefix[prev + 1];
      psi_entity =
          ents[best] + between + (prev >= 0 ? chart.best_prefix[prev] : 0.0);
    }
    if (best != kNil && psi_entity > psi_nil) {
      chart.takes_entity[t] = true;
      chart.best_prefix[t] = psi_entity;
    } else {
      chart.best_prefix[t] = psi_nil;
    }
  }
  return chart;
}

Decoded DecodeTable(const std::vector<TokenSpan> &spans,
                    const ScoreTable &scores) {
  Decoded out;
  const int n = static_cast<int>(spans.size());
  out.assignment.labels.assign(n, kNil);
  if (n == 0) return out;
  const Chart chart = BuildChart(spans, scores);
  out.score = chart.best_prefix[n - 1];
  int t = n - 1;
  while (t >= 0) {
    if (chart.takes_entity[t]) {
      out.assignment.labels[t] = chart.best_entity[t];
      t = chart.prev[t];
    } else {
      --t;
    }
  }
  return out;
}

namespace {

// The decoder's backtrace settles ties from the last candidate backwards,
// taking Nil first and then the lowest entity index.
bool PreferredTie(const std::vector<int> &a, const std::vector<int> &b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

struct BruteForceSearch {
  const std::vector<TokenSpan> &spans;
  const ScoreTable &scores;
  std::vector<int> labels;
  Decoded best;
  bool found = false;

  void Visit(std::size_t t, double partial) {
    if (t == spans.size()) {
      if (!found || partial > best.score ||
          (partial == best.score && PreferredTie(labels, best.assignment.labels))) {
        found = true;
        best.score = partial;
        best.assignment.labels = labels;
      }
      return;
    }
    labels[t] = kNil;
    Visit(t + 1, partial + scores[t].nil);
    for (int k = 0; k < static_cast<int>(scores[t].entities.size()); ++k) {
      bool clash = false;
      for (std::size_t s = 0; s < t && !clash; ++s) {
        clash = labels[s] != kNil && spans[s].Overlaps(spans[t]);
      }
      if (clash) continue;
      labels[t] = k;
      Visit(t + 1, partial + scores[t].entities[k]);
    }
    labels[t] = kNil;
  }
};

}  // namespace

Decoded BruteForceTable(const std::vector<TokenSpan> &spans,
                        const ScoreTable &scores) {
  if (spans.size() != scores.size()) {
    throw std::invalid_argument("span and score tables differ in length");
  }
  double space = 1.0;
  for (const auto &s : scores) {
    space *= static_cast<double>(s.entities.size() + 1);
  }
  if (space > kMaxBruteForce) {
    throw std::length_error("brute-force search space too large");
  }
  BruteForceSearch search{spans, scores, std::vector<int>(spans.size(), kNil),
                          {}, false};
  search.Visit(0, 0.0);
  return search.best;
}

Decoded Decode(const Model &model, const Tweet &tweet,
               const std::vector<MentionCandidate> &candidates,
               const UserId &user) {
  return DecodeTable(SpansOf(candidates),
                     ComputeScores(model, tweet, candidates, user));
}

Decoded DecodeLossAugmented(const Model &model, const Tweet &tweet,
                            const std::vector<MentionCandidate> &candidates,
                            const UserId &user, const Assignment &gold,
                            double hamming_weight) {
  ScoreTable scores = ComputeScores(model, tweet, candidates, user);
  AddHammingLoss(scores, gold, hamming_weight);
  return DecodeTable(SpansOf(candidates), scores);
}

Decoded BruteForceDecode(const Model &model, const Tweet &tweet,
                         const std::vector<MentionCandidate> &candidates,
                         const UserId &user, const Assignment *gold,
                         double hamming_weight) {
  ScoreTable scores = ComputeScores(model, tweet, candidates, user);
  if (gold != nullptr) AddHammingLoss(scores, *gold, hamming_weight);
  return BruteForceTable(SpansOf(candidates), scores);
}

}  // namespace sociolink
