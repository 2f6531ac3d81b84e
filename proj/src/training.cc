#include "sociolink/training.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_set>

#include "sociolink/linker.h"

namespace sociolink {

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw DataError("learning_rate must be > 0");
  if (hamming_weight < 0.0) throw DataError("hamming_weight must be >= 0");
  if (l2_comp < 0.0 || l2_mlp < 0.0) throw DataError("l2 must be >= 0");
  if (max_epochs < 0) throw DataError("max_epochs must be >= 0");
  if (patience < 1) throw DataError("patience must be >= 1");
  if (eval_every < 1) throw DataError("eval_every must be >= 1");
  if (threads < 1) throw DataError("threads must be >= 1");
}

TrainConfig ParseTrainConfig(const KeyValues &values) {
  TrainConfig c;
  for (const auto &[key, value] : values) {
    try {
      if (key == "learning_rate") {
        c.learning_rate = ParseDouble(value);
      } else if (key == "hamming_weight") {
        c.hamming_weight = ParseDouble(value);
      } else if (key == "l2_comp") {
        c.l2_comp = ParseDouble(value);
      } else if (key == "l2_mlp") {
        c.l2_mlp = ParseDouble(value);
      } else if (key == "max_epochs") {
        c.max_epochs = static_cast<int>(ParseInt(value));
      } else if (key == "patience") {
        c.patience = static_cast<int>(ParseInt(value));
      } else if (key == "eval_every") {
        c.eval_every = static_cast<int>(ParseInt(value));
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(ParseInt(value));
      } else if (key == "threads") {
        c.threads = static_cast<int>(ParseInt(value));
      } else {
        throw DataError("unknown training option '" + key + "'");
      }
    } catch (const DataError &e) {
      throw DataError("training option " + key + ": " + e.what());
    }
  }
  c.Validate();
  return c;
}

KeyValues FormatTrainConfig(const TrainConfig &c) {
  return {
      {"learning_rate", FormatDouble(c.learning_rate)},
      {"hamming_weight", FormatDouble(c.hamming_weight)},
      {"l2_comp", FormatDouble(c.l2_comp)},
      {"l2_mlp", FormatDouble(c.l2_mlp)},
      {"max_epochs", std::to_string(c.max_epochs)},
      {"patience", std::to_string(c.patience)},
      {"eval_every", std::to_string(c.eval_every)},
      {"seed", std::to_string(c.seed)},
      {"threads", std::to_string(c.threads)},
  };
}

std::optional<Assignment> GoldAssignment(
    const Tweet &tweet, const std::vector<MentionCandidate> &candidates) {
  Assignment gold;
  gold.labels.assign(candidates.size(), kNil);
  for (const Annotation &a : tweet.gold) {
    bool placed = false;
    for (std::size_t t = 0; t < candidates.size() && !placed; ++t) {
      if (candidates[t].span != a.span) continue;
      const int label = candidates[t].Find(a.entity);
      if (label == kNil) continue;
      gold.labels[t] = label;
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  return gold;
}

std::vector<TrainExample> BuildExamples(const std::vector<Tweet> &tweets,
                                        const Lexicon &lexicon,
                                        std::size_t *skipped) {
  std::vector<TrainExample> examples;
  std::size_t n_skipped = 0;
  for (const Tweet &t : tweets) {
    TrainExample ex;
    ex.tweet = &t;
    ex.candidates = GenerateCandidates(t, lexicon);
    auto gold = GoldAssignment(t, ex.candidates);
    if (!gold) {
      ++n_skipped;
      continue;
    }
    ex.gold = std::move(*gold);
    examples.push_back(std::move(ex));
  }
  if (skipped != nullptr) *skipped = n_skipped;
  return examples;
}

namespace {

int HammingDistance(const Assignment &a, const Assignment &b) {
  int d = 0;
  for (std::size_t t = 0; t < a.size(); ++t) d += a.labels[t] != b.labels[t];
  return d;
}

void Decay(Eigen::MatrixXd &m, double factor) {
  if (factor != 1.0) m *= factor;
}

void Decay(Eigen::VectorXd &v, double factor) {
  if (factor != 1.0) v *= factor;
}

}  // namespace

LossResult TweetLoss(const Model &model, const Tweet &tweet,
                     const std::vector<MentionCandidate> &candidates,
                     const UserId &user, const Assignment &gold,
                     const TrainConfig &config) {
  LossResult r;
  r.predicted = DecodeLossAugmented(model, tweet, candidates, user, gold,
                                    config.hamming_weight);
  if (r.predicted.assignment == gold) return r;
  const double augmented =
      config.hamming_weight * HammingDistance(r.predicted.assignment, gold) +
      ScoreMessage(model, tweet, candidates, r.predicted.assignment, user);
  const double gold_score = ScoreMessage(model, tweet, candidates, gold, user);
  r.loss = std::max(0.0, augmented - gold_score);
  return r;
}

LossResult SgdStep(Model &model, const Tweet &tweet,
                   const std::vector<MentionCandidate> &candidates,
                   const UserId &user, const Assignment &gold,
                   const TrainConfig &config) {
  LossResult r = TweetLoss(model, tweet, candidates, user, gold, config);
  const double lr = config.learning_rate;
  if (r.loss > 0.0) {
    Gradients g =
        Backward(model, tweet, candidates, r.predicted.assignment, user, 1.0);
    g += Backward(model, tweet, candidates, gold, user, -1.0);
    model.mlp.W -= lr * g.W;
    model.mlp.b -= lr * g.b;
    model.mlp.beta -= lr * g.beta;
    model.mlp.b_out -= lr * g.b_out;
    if (model.use_user_entity) model.comp.W_ue -= lr * g.W_ue;
    if (model.use_mention_entity) model.comp.W_me -= lr * g.W_me;
  }
  const double comp_decay = 1.0 - lr * config.l2_comp;
  Decay(model.comp.W_ue, comp_decay);
  Decay(model.comp.W_me, comp_decay);
  const double mlp_decay = 1.0 - lr * config.l2_mlp;
  Decay(model.mlp.W, mlp_decay);
  Decay(model.mlp.beta, mlp_decay);
  return r;
}

TrainState Train(const Model &initial, const std::vector<Tweet> &train,
                 const std::vector<Tweet> &dev, const Lexicon &lexicon,
                 const TrainConfig &config, const EpochCallback &on_epoch) {
  config.Validate();
  if (train.empty()) throw DataError("training corpus is empty");
  {
    std::unordered_set<std::string> train_ids;
    for (const Tweet &t : train) train_ids.insert(t.id);
    for (const Tweet &t : dev) {
      if (train_ids.count(t.id) != 0) {
        throw DataError("dev tweet " + t.id + " also appears in training data");
      }
    }
  }

  TrainState state;
  std::vector<TrainExample> examples =
      BuildExamples(train, lexicon, &state.skipped_train);
  Model model = initial;
  state.model = initial;

  auto evaluate = [&](EpochLog &entry) {
    const LinkingResult result =
        Evaluate(dev, LinkCorpus(model, dev, lexicon, config.threads));
    entry.evaluated = true;
    entry.dev_counts = result.total;
    entry.dev = result.prf();
    if (entry.dev.f1 > state.best_dev_f1) {
      state.best_dev_f1 = entry.dev.f1;
      state.best_epoch = entry.epoch;
      state.model = model;
      return true;
    }
    return false;
  };

  if (!dev.empty()) {
    EpochLog entry;
    evaluate(entry);
    state.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  int stale = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total_loss = 0.0;
    for (std::size_t i : order) {
      const TrainExample &ex = examples[i];
      total_loss += SgdStep(model, *ex.tweet, ex.candidates, ex.tweet->author,
                            ex.gold, config)
                        .loss;
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.mean_loss =
        examples.empty() ? 0.0 : total_loss / static_cast<double>(examples.size());
    state.loss_trace.push_back(entry.mean_loss);
    state.epochs_run = epoch;

    bool stop = false;
    if (!dev.empty() && epoch % config.eval_every == 0) {
      if (evaluate(entry)) {
        stale = 0;
      } else if (++stale >= config.patience) {
        stop = true;
      }
    }
    state.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
    if (stop) break;
  }
  state.last = model;
  if (dev.empty()) state.model = model;
  return state;
}

}  // namespace sociolink
