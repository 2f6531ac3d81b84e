#ifndef SOCIOLINK_TRAINING_H_
#define SOCIOLINK_TRAINING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sociolink/config.h"
#include "sociolink/corpus.h"
#include "sociolink/eval.h"
#include "sociolink/inference.h"
#include "sociolink/scorer.h"

namespace sociolink {

struct TrainConfig {
  double learning_rate = 0.01;
  double hamming_weight = 0.2;
  // Per-update decay factor (1 - lr * l2_comp) on W_ue and W_me.
  double l2_comp = 0.005;
  // Same decay on the MLP weight matrices W and beta; off by default.
  double l2_mlp = 0.0;
  int max_epochs = 1000;
  // Evaluations without dev improvement before stopping.
  int patience = 50;
  int eval_every = 1;
  std::uint64_t seed = 1;
  // Dev decoding fan-out.
  int threads = 1;

  void Validate() const;
};

// Recognized keys are the field names above. Unknown keys and malformed
// values throw DataError.
TrainConfig ParseTrainConfig(const KeyValues &values);
KeyValues FormatTrainConfig(const TrainConfig &config);

// Maps gold annotations onto candidates: a gold item labels the candidate
// with the identical span whose list contains the gold entity. Returns
// nullopt when some gold item has no such candidate.
std::optional<Assignment> GoldAssignment(
    const Tweet &tweet, const std::vector<MentionCandidate> &candidates);

struct TrainExample {
  const Tweet *tweet = nullptr;
  std::vector<MentionCandidate> candidates;
  Assignment gold;
};

// Tweets without a feasible gold structure are skipped and counted.
std::vector<TrainExample> BuildExamples(const std::vector<Tweet> &tweets,
                                        const Lexicon &lexicon,
                                        std::size_t *skipped = nullptr);

struct LossResult {
  double loss = 0.0;
  Decoded predicted;  // loss-augmented argmax
};

// max_y [Delta(y, gold) + s(y)] - s(gold), non-negative. Exactly 0 when the
// augmented argmax is gold itself.
LossResult TweetLoss(const Model &model, const Tweet &tweet,
                     const std::vector<MentionCandidate> &candidates,
                     const UserId &user, const Assignment &gold,
                     const TrainConfig &config);

// One subgradient step on TweetLoss followed by L2 decay. Returns the
// pre-update loss.
LossResult SgdStep(Model &model, const Tweet &tweet,
                   const std::vector<MentionCandidate> &candidates,
                   const UserId &user, const Assignment &gold,
                   const TrainConfig &config);

struct EpochLog {
  int epoch = 0;
  double mean_loss = 0.0;
  bool evaluated = false;
  Counts dev_counts;
  Prf dev;
};

struct TrainState {
  Model model;  // best dev snapshot (last model when dev is empty)
  Model last;   // parameters after the final epoch
  int epochs_run = 0;
  int best_epoch = 0;
  double best_dev_f1 = -1.0;
  std::size_t skipped_train = 0;
  std::vector<double> loss_trace;
  std::vector<EpochLog> log;
};

using EpochCallback = std::function<void(const EpochLog &)>;

// Per-tweet SGD over a seeded per-epoch shuffle. Dev F1 is measured before
// the first epoch and every eval_every epochs after it. Throws DataError if
// the training corpus is empty or shares tweet ids with dev.
TrainState Train(const Model &initial, const std::vector<Tweet> &train,
                 const std::vector<Tweet> &dev, const Lexicon &lexicon,
                 const TrainConfig &config,
                 const EpochCallback &on_epoch = {});

}  // namespace sociolink

#endif  // SOCIOLINK_TRAINING_H_
