#include <gtest/gtest.h>

#include <random>

#include "sociolink/linker.h"
#include "sociolink/netembed.h"
#include "sociolink/synthetic.h"
#include "sociolink/training.h"
#include "test_support.h"

namespace sociolink {
namespace {

using testing::RandomInstance;

int Hamming(const Assignment &a, const Assignment &b) {
  int d = 0;
  for (std::size_t t = 0; t < a.size(); ++t) d += a.labels[t] != b.labels[t];
  return d;
}

TrainConfig NoDecay() {
  TrainConfig c;
  c.l2_comp = 0.0;
  return c;
}

TEST(Config, ParsesKnownKeysAndRejectsOthers) {
  const TrainConfig c = ParseTrainConfig(
      {{"learning_rate", "0.05"}, {"max_epochs", "7"}, {"l2_mlp", "0.001"}});
  EXPECT_EQ(c.learning_rate, 0.05);
  EXPECT_EQ(c.max_epochs, 7);
  EXPECT_EQ(c.l2_mlp, 0.001);
  EXPECT_EQ(c.hamming_weight, 0.2);
  EXPECT_THROW(ParseTrainConfig({{"learning_rat", "0.1"}}), DataError);
  EXPECT_THROW(ParseTrainConfig({{"max_epochs", "ten"}}), DataError);
  EXPECT_THROW(ParseTrainConfig({{"learning_rate", "-1"}}), DataError);
  EXPECT_THROW(ParseTrainConfig({{"patience", "0"}}), DataError);
}

TEST(Config, FormatRoundTrips) {
  TrainConfig c;
  c.learning_rate = 0.123;
  c.seed = 99;
  const TrainConfig back = ParseTrainConfig(FormatTrainConfig(c));
  EXPECT_EQ(back.learning_rate, 0.123);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(FormatTrainConfig(back), FormatTrainConfig(c));
}

TEST(Config, KeyValueFiles) {
  const KeyValues kv = ParseKeyValues("# comment\n\nlearning_rate = 0.5  # trailing\nseed=3\n");
  EXPECT_EQ(kv.at("learning_rate"), "0.5");
  EXPECT_EQ(kv.at("seed"), "3");
  EXPECT_THROW(ParseKeyValues("a = 1\na = 2\n"), ParseError);
  EXPECT_THROW(ParseKeyValues("just words\n"), ParseError);
  EXPECT_THROW(ParseKeyValues(" = 4\n"), ParseError);
}

TEST(Gold, MapsAnnotationsOntoCandidates) {
  Lexicon lex;
  lex.Add("red sox", {{"Sox", 0.9}, {"Film", 0.1}});
  lex.Add("red", {{"Color", 1.0}});
  Tweet t;
  t.id = "1";
  t.author = "u";
  t.tokens = {"go", "red", "sox"};
  t.gold = {{{1, 3}, "Film"}};
  const auto cands = GenerateCandidates(t, lex);
  const auto gold = GoldAssignment(t, cands);
  ASSERT_TRUE(gold.has_value());
  EXPECT_EQ(gold->labels, (std::vector<int>{kNil, 1}));
  t.gold = {{{1, 3}, "Unknown"}};
  EXPECT_FALSE(GoldAssignment(t, cands).has_value());
  t.gold = {{{0, 1}, "Go"}};
  EXPECT_FALSE(GoldAssignment(t, cands).has_value());
  std::size_t skipped = 0;
  EXPECT_TRUE(BuildExamples({t}, lex, &skipped).empty());
  EXPECT_EQ(skipped, 1u);
}

TEST(Loss, GoldPredictionGivesExactlyZero) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = RandomInstance(rng);
    const Decoded best = Decode(inst.model, inst.tweet, inst.candidates, inst.user);
    TrainConfig c;
    c.hamming_weight = 0.0;
    const LossResult r =
        TweetLoss(inst.model, inst.tweet, inst.candidates, inst.user, best.assignment, c);
    EXPECT_EQ(r.loss, 0.0);
    EXPECT_EQ(r.predicted.assignment, best.assignment);
  }
}

TEST(Loss, SatisfiedMarginGivesZero) {
  std::mt19937_64 rng(2);
  auto inst = RandomInstance(rng);
  // Nil scores dominate through a huge b_out-free Nil route: push every
  // entity score far down with a negative prior weight.
  Assignment gold;
  gold.labels.assign(inst.candidates.size(), kNil);
  Model &m = inst.model;
  m.mlp.W.setZero();
  m.mlp.b.setZero();
  m.mlp.W(0, 4) = 3.0;  // Nil indicator feature
  m.mlp.beta.setZero();
  m.mlp.beta(0) = 10.0;
  m.comp.W_ue.setZero();
  m.comp.W_me.setZero();
  const LossResult r =
      TweetLoss(m, inst.tweet, inst.candidates, inst.user, gold, TrainConfig{});
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_EQ(r.predicted.assignment, gold);
}

TEST(Loss, NonNegativeAndEqualToBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = RandomInstance(rng);
    const Assignment gold = testing::RandomValidAssignment(inst.candidates, rng);
    const TrainConfig c;
    const LossResult r = TweetLoss(inst.model, inst.tweet, inst.candidates, inst.user, gold, c);
    EXPECT_GE(r.loss, 0.0);
    const Decoded oracle = BruteForceDecode(inst.model, inst.tweet, inst.candidates,
                                            inst.user, &gold, c.hamming_weight);
    const double s_gold = ScoreMessage(inst.model, inst.tweet, inst.candidates, gold, inst.user);
    EXPECT_NEAR(r.loss, oracle.score - s_gold, 1e-9);
    ASSERT_EQ(r.predicted.assignment, oracle.assignment);
    const double exact =
        oracle.assignment == gold
            ? 0.0
            : std::max(0.0, c.hamming_weight * Hamming(oracle.assignment, gold) +
                                ScoreMessage(inst.model, inst.tweet, inst.candidates,
                                             oracle.assignment, inst.user) -
                                s_gold);
    EXPECT_EQ(r.loss, exact);
  }
}

TEST(Sgd, ZeroLossOnlyDecaysComposition) {
  std::mt19937_64 rng(4);
  const auto inst = RandomInstance(rng);
  const Decoded best = Decode(inst.model, inst.tweet, inst.candidates, inst.user);
  TrainConfig c;
  c.hamming_weight = 0.0;
  Model m = inst.model;
  const LossResult r = SgdStep(m, inst.tweet, inst.candidates, inst.user, best.assignment, c);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_EQ(m.mlp.W, inst.model.mlp.W);
  EXPECT_EQ(m.mlp.b, inst.model.mlp.b);
  EXPECT_EQ(m.mlp.beta, inst.model.mlp.beta);
  EXPECT_EQ(m.mlp.b_out, inst.model.mlp.b_out);
  const double factor = 1.0 - c.learning_rate * c.l2_comp;
  EXPECT_EQ(m.comp.W_ue, (inst.model.comp.W_ue * factor).eval());
  EXPECT_EQ(m.comp.W_me, (inst.model.comp.W_me * factor).eval());
}

TEST(Sgd, ZeroLossWithoutDecayIsBitwiseNoop) {
  std::mt19937_64 rng(5);
  const auto inst = RandomInstance(rng);
  const Decoded best = Decode(inst.model, inst.tweet, inst.candidates, inst.user);
  TrainConfig c = NoDecay();
  c.hamming_weight = 0.0;
  Model m = inst.model;
  SgdStep(m, inst.tweet, inst.candidates, inst.user, best.assignment, c);
  const auto before = testing::ParameterPointers(const_cast<Model &>(inst.model));
  const auto after = testing::ParameterPointers(m);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(*before[i], *after[i]);
}

TEST(Sgd, UpdateIsTheScoreDifferenceSubgradient) {
  std::mt19937_64 rng(6);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 50; ++trial) {
    const auto inst = RandomInstance(rng);
    const Assignment gold = testing::RandomValidAssignment(inst.candidates, rng);
    const TrainConfig c = NoDecay();
    Model m = inst.model;
    const LossResult r = SgdStep(m, inst.tweet, inst.candidates, inst.user, gold, c);
    if (r.loss == 0.0) continue;
    ++checked;
    Gradients g = Backward(inst.model, inst.tweet, inst.candidates, r.predicted.assignment,
                           inst.user, 1.0);
    g += Backward(inst.model, inst.tweet, inst.candidates, gold, inst.user, -1.0);
    const auto grad = testing::Flatten(g);
    const auto before = testing::ParameterPointers(const_cast<Model &>(inst.model));
    const auto after = testing::ParameterPointers(m);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      EXPECT_NEAR(*after[i] - *before[i], -c.learning_rate * grad[i], 1e-15);
    }
    const auto fd = testing::CheckScoreDifferenceGradient(
        inst.model, inst.tweet, inst.candidates, inst.user, r.predicted.assignment, gold);
    EXPECT_LT(fd.max_relative_error, 1e-4);
  }
  EXPECT_EQ(checked, 50);
}

TEST(Sgd, SmallStepDescendsOnSingleCandidate) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 100; ++trial) {
    auto inst = RandomInstance(rng, 1);
    const Assignment gold = testing::RandomValidAssignment(inst.candidates, rng);
    TrainConfig c = NoDecay();
    c.learning_rate = 1e-4;
    const double before =
        TweetLoss(inst.model, inst.tweet, inst.candidates, inst.user, gold, c).loss;
    if (before <= 0.0) continue;
    ++checked;
    Model m = inst.model;
    SgdStep(m, inst.tweet, inst.candidates, inst.user, gold, c);
    EXPECT_LE(TweetLoss(m, inst.tweet, inst.candidates, inst.user, gold, c).loss, before);
  }
  EXPECT_EQ(checked, 100);
}

struct SynthFixture {
  SyntheticData data;
  CorpusSplit split;
  Model model;
};

SynthFixture MakeSynth(const SynthConfig &cfg, std::uint64_t seed, bool user_entity = true) {
  SynthFixture f;
  f.data = GenerateSynthetic(cfg, seed);
  f.split = SplitCorpus(f.data.tweets, 0.2, 0.2, seed);
  NetEmbedConfig ne;
  ne.dim = 16;
  ne.seed = seed;
  auto users = std::make_shared<const EmbeddingTable>(TrainLine2(f.data.graph, ne));
  auto words = std::make_shared<const EmbeddingTable>(f.data.words);
  auto entities = std::make_shared<const EmbeddingTable>(f.data.entities);
  ModelOptions options;
  options.hidden = 10;
  options.use_user_entity = user_entity;
  options.seed = seed;
  f.model = InitModel(users, words, entities, MakeFeatureExtractor("default"), options);
  return f;
}

TEST(Train, ZeroEpochsReturnsInitialModel) {
  SynthConfig cfg;
  cfg.users = 10;
  cfg.tweets_per_user = 3;
  const auto f = MakeSynth(cfg, 1);
  TrainConfig c;
  c.max_epochs = 0;
  const TrainState s = Train(f.model, f.split.train, f.split.dev, f.data.lexicon, c);
  EXPECT_EQ(s.model.mlp.W, f.model.mlp.W);
  EXPECT_EQ(s.model.comp.W_ue, f.model.comp.W_ue);
  EXPECT_EQ(s.epochs_run, 0);
  EXPECT_EQ(s.best_epoch, 0);
  ASSERT_EQ(s.log.size(), 1u);
  EXPECT_TRUE(s.log[0].evaluated);
}

TEST(Train, RejectsBadCorpora) {
  SynthConfig cfg;
  cfg.users = 10;
  cfg.tweets_per_user = 3;
  const auto f = MakeSynth(cfg, 1);
  EXPECT_THROW(Train(f.model, {}, f.split.dev, f.data.lexicon, TrainConfig{}), DataError);
  EXPECT_THROW(Train(f.model, f.split.train, f.split.train, f.data.lexicon, TrainConfig{}),
               DataError);
}

TEST(Train, SeededRunsAreIdentical) {
  SynthConfig cfg;
  cfg.users = 20;
  const auto f = MakeSynth(cfg, 2);
  TrainConfig c;
  c.max_epochs = 5;
  const TrainState a = Train(f.model, f.split.train, f.split.dev, f.data.lexicon, c);
  const TrainState b = Train(f.model, f.split.train, f.split.dev, f.data.lexicon, c);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  EXPECT_EQ(a.model.mlp.W, b.model.mlp.W);
  EXPECT_EQ(a.best_epoch, b.best_epoch);
}

TEST(Train, BestSnapshotAndPatience) {
  SynthConfig cfg;
  cfg.users = 20;
  const auto f = MakeSynth(cfg, 3);
  TrainConfig c;
  c.max_epochs = 200;
  c.patience = 3;
  c.eval_every = 2;
  const TrainState s = Train(f.model, f.split.train, f.split.dev, f.data.lexicon, c);
  EXPECT_LT(s.epochs_run, 200);
  double best = -1.0;
  int since = 0;
  for (const EpochLog &e : s.log) {
    EXPECT_EQ(e.evaluated, e.epoch % 2 == 0);
    if (!e.evaluated) continue;
    if (e.dev.f1 > best) {
      best = e.dev.f1;
      since = 0;
    } else {
      ++since;
    }
  }
  EXPECT_EQ(since, 3);
  EXPECT_EQ(best, s.best_dev_f1);
  const LinkingResult again =
      Evaluate(f.split.dev, LinkCorpus(s.model, f.split.dev, f.data.lexicon));
  EXPECT_EQ(again.prf().f1, s.best_dev_f1);
}

TEST(Train, SeparableCorpusReachesPerfectDevF1) {
  SynthConfig cfg;
  cfg.ambiguity = 0.0;
  const auto f = MakeSynth(cfg, 4);
  for (const auto &[surface, entries] : f.data.lexicon.entries()) {
    ASSERT_EQ(entries.size(), 1u) << surface;
  }
  TrainConfig c;
  c.max_epochs = 50;
  c.patience = 50;
  const TrainState s = Train(f.model, f.split.train, f.split.dev, f.data.lexicon, c);
  EXPECT_EQ(s.best_dev_f1, 1.0);
  EXPECT_LE(s.best_epoch, 50);
}

TEST(Train, ZeroLossCorpusOnlyShrinksComposition) {
  SynthConfig cfg;
  cfg.users = 10;
  cfg.tweets_per_user = 4;
  const auto f = MakeSynth(cfg, 5);
  // Gold = whatever the model already predicts, with no Hamming margin.
  std::vector<Tweet> train = f.split.train;
  for (Tweet &t : train) {
    t.gold.clear();
    for (const Link &l : LinkTweet(f.model, t, f.data.lexicon).links) {
      t.gold.push_back({l.span, l.entity});
    }
  }
  TrainConfig c;
  c.hamming_weight = 0.0;
  c.max_epochs = 3;
  const TrainState s = Train(f.model, train, {}, f.data.lexicon, c);
  for (double loss : s.loss_trace) EXPECT_EQ(loss, 0.0);
  EXPECT_EQ(s.model.mlp.W, f.model.mlp.W);
  const double ratio = s.model.comp.W_ue.norm() / f.model.comp.W_ue.norm();
  const double steps = 3.0 * static_cast<double>(train.size());
  EXPECT_NEAR(ratio, std::pow(1.0 - c.learning_rate * c.l2_comp, steps), 1e-12);
}

}  // namespace
}  // namespace sociolink
