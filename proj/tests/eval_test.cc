#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sociolink/eval.h"
#include "test_support.h"

namespace sociolink {
namespace {

Link L(int s, int e, const std::string &entity) { return {{s, e}, entity}; }

Tweet GoldTweet(const std::string &id, std::vector<Annotation> gold, int n = 10) {
  Tweet t;
  t.id = id;
  t.author = "u";
  t.tokens.assign(n, "x");
  t.gold = std::move(gold);
  return t;
}

TEST(Prf, Examples) {
  const Prf perfect = ComputePrf({4, 4, 4});
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  const Prf partial = ComputePrf({3, 4, 2});
  EXPECT_EQ(partial.precision, 2.0 / 3.0);
  EXPECT_EQ(partial.recall, 0.5);
  EXPECT_NEAR(partial.f1, 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(partial.f1, 0.5714, 5e-5);
  const Prf none = ComputePrf({0, 4, 0});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  EXPECT_EQ(ComputePrf({0, 0, 0}).f1, 0.0);
}

TEST(Match, Examples) {
  const std::vector<Link> gold{L(0, 2, "E1"), L(3, 4, "E2")};
  EXPECT_EQ(MatchAndCount(gold, gold), (Counts{2, 2, 2}));
  EXPECT_EQ(MatchAndCount({L(0, 2, "E1")}, {L(1, 3, "E1")}), (Counts{1, 1, 1}));
  EXPECT_EQ(MatchAndCount({L(0, 2, "E1")}, {L(0, 2, "E2")}), (Counts{1, 1, 0}));
  EXPECT_EQ(MatchAndCount({L(0, 2, "E1")}, {L(2, 3, "E1")}), (Counts{1, 1, 0}));
}

TEST(Match, GoldMatchedAtMostOnce) {
  EXPECT_EQ(MatchAndCount({L(0, 1, "E"), L(1, 2, "E")}, {L(0, 2, "E")}),
            (Counts{2, 1, 1}));
}

TEST(Match, OverlappingPredictionsAreRejected) {
  EXPECT_THROW(MatchAndCount({L(0, 2, "E"), L(1, 3, "F")}, {}), DataError);
}

std::vector<Link> RandomLinks(std::mt19937_64 &rng, int n_tokens) {
  std::vector<Link> links;
  int pos = 0;
  while (true) {
    pos += static_cast<int>(rng() % 3);
    const int len = 1 + static_cast<int>(rng() % 3);
    if (pos + len > n_tokens) break;
    links.push_back(L(pos, pos + len, "E" + std::to_string(rng() % 2)));
    pos += len;
  }
  return links;
}

TEST(Match, GreedyAgreesWithOptimalOnRandomInstances) {
  std::mt19937_64 rng(1);
  int agree = 0;
  const int trials = 5000;
  for (int i = 0; i < trials; ++i) {
    const auto pred = RandomLinks(rng, 8);
    const auto gold = RandomLinks(rng, 8);
    const Counts greedy = MatchAndCount(pred, gold);
    const Counts optimal = MatchAndCountOptimal(pred, gold);
    EXPECT_LE(greedy.correct, optimal.correct);
    agree += greedy == optimal;
  }
  EXPECT_GE(agree, trials * 99 / 100);
}

TEST(Evaluate, MissingPredictionIsEmpty) {
  const std::vector<Tweet> gold{GoldTweet("a", {{{0, 1}, "E"}}), GoldTweet("b", {{{2, 3}, "F"}})};
  const LinkingResult r = Evaluate(gold, {{"a", {L(0, 1, "E")}}});
  EXPECT_EQ(r.total, (Counts{1, 2, 1}));
  EXPECT_EQ(r.ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(r.per_tweet[1], (Counts{0, 1, 0}));
}

TEST(Evaluate, UnknownOrDuplicateIdsAreErrors) {
  const std::vector<Tweet> gold{GoldTweet("a", {})};
  EXPECT_THROW(Evaluate(gold, {{"zzz", {}}}), DataError);
  EXPECT_THROW(Evaluate(gold, {{"a", {}}, {"a", {}}}), DataError);
}

TEST(Evaluate, InvariantToTweetOrder) {
  std::mt19937_64 rng(2);
  std::vector<Tweet> gold;
  std::vector<TweetLinks> pred;
  for (int i = 0; i < 30; ++i) {
    std::vector<Annotation> ann;
    for (const Link &l : RandomLinks(rng, 10)) ann.push_back({l.span, l.entity});
    gold.push_back(GoldTweet(std::to_string(i), ann));
    pred.push_back({std::to_string(i), RandomLinks(rng, 10)});
  }
  const double f1 = Evaluate(gold, pred).prf().f1;
  std::shuffle(gold.begin(), gold.end(), rng);
  std::shuffle(pred.begin(), pred.end(), rng);
  EXPECT_EQ(Evaluate(gold, pred).prf().f1, f1);
}

TEST(Evaluate, CorrectAdditionsHelpAndWrongOnesHurt) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Link> gold = RandomLinks(rng, 12);
    if (gold.empty()) continue;
    std::vector<Link> pred;
    for (const Link &g : gold) {
      if (rng() % 2) pred.push_back(g);
    }
    const double base = ComputePrf(MatchAndCount(pred, gold)).f1;
    // Add one missing gold item (no overlap with existing predictions).
    for (const Link &g : gold) {
      if (std::find(pred.begin(), pred.end(), g) != pred.end()) continue;
      std::vector<Link> more = pred;
      more.push_back(g);
      std::sort(more.begin(), more.end(), [](const Link &a, const Link &b) {
        return a.span < b.span;
      });
      EXPECT_GE(ComputePrf(MatchAndCount(more, gold)).f1, base);
      more.erase(std::find(more.begin(), more.end(), g));
      more.push_back(L(g.span.start, g.span.end, "WRONG"));
      std::sort(more.begin(), more.end(), [](const Link &a, const Link &b) {
        return a.span < b.span;
      });
      EXPECT_LE(ComputePrf(MatchAndCount(more, gold)).f1, base);
      break;
    }
  }
}

// Gold has one mention per tweet; A is always right, B right on every
// third tweet.
std::pair<LinkingResult, LinkingResult> DominatingPair(int n) {
  std::vector<Tweet> gold;
  std::vector<TweetLinks> a, b;
  for (int i = 0; i < n; ++i) {
    const std::string id = "t" + std::to_string(i);
    gold.push_back(GoldTweet(id, {{{0, 1}, "E"}}));
    a.push_back({id, {L(0, 1, "E")}});
    b.push_back({id, {L(0, 1, i % 3 == 0 ? "E" : "F")}});
  }
  return {Evaluate(gold, a), Evaluate(gold, b)};
}

TEST(Bootstrap, DominatingSystemIsSignificant) {
  const auto [a, b] = DominatingPair(60);
  const BootstrapResult r = BootstrapCompare(a, b, 100, 1);
  EXPECT_GT(r.t_statistic, 0.0);
  EXPECT_LT(r.p_value, 0.01);
  ASSERT_EQ(r.f1_pairs.size(), 100u);
  for (const auto &[fa, fb] : r.f1_pairs) EXPECT_GT(fa, fb);
}

TEST(Bootstrap, IdenticalSystemsGiveNoEvidence) {
  const auto [a, b] = DominatingPair(20);
  const BootstrapResult r = BootstrapCompare(b, b, 100, 1);
  EXPECT_EQ(r.t_statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Bootstrap, SeededRepeatIsIdentical) {
  const auto [a, b] = DominatingPair(40);
  const BootstrapResult x = BootstrapCompare(a, b, 100, 9);
  const BootstrapResult y = BootstrapCompare(a, b, 100, 9);
  EXPECT_EQ(x.t_statistic, y.t_statistic);
  EXPECT_EQ(x.p_value, y.p_value);
  EXPECT_EQ(x.f1_pairs, y.f1_pairs);
}

// Two-tailed Student-t tail by Simpson integration of the density.
double TwoTailedP(double t, double df) {
  const double log_c = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                       0.5 * std::log(df * M_PI);
  auto density = [&](double x) {
    return std::exp(log_c - (df + 1.0) / 2.0 * std::log1p(x * x / df));
  };
  const int n = 20000;
  const double h = std::abs(t) / n;
  double sum = density(0.0) + density(std::abs(t));
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * density(i * h);
  return 1.0 - 2.0 * sum * h / 3.0;
}

TEST(Bootstrap, TailOracleSanity) {
  EXPECT_NEAR(TwoTailedP(1.9839715184496334, 100.0), 0.05, 1e-9);
  EXPECT_NEAR(TwoTailedP(0.0, 5.0), 1.0, 1e-12);
}

TEST(Bootstrap, TStatisticMatchesSamples) {
  // Noisy pair: B beats A on some tweets.
  std::mt19937_64 rng(4);
  std::vector<Tweet> gold;
  std::vector<TweetLinks> a, b;
  for (int i = 0; i < 50; ++i) {
    const std::string id = "t" + std::to_string(i);
    gold.push_back(GoldTweet(id, {{{0, 1}, "E"}}));
    a.push_back({id, {L(0, 1, rng() % 2 ? "E" : "F")}});
    b.push_back({id, {L(0, 1, rng() % 2 ? "E" : "F")}});
  }
  const BootstrapResult r = BootstrapCompare(Evaluate(gold, a), Evaluate(gold, b), 100, 3);
  double mean = 0.0;
  for (const auto &[fa, fb] : r.f1_pairs) mean += fa - fb;
  mean /= 100.0;
  double ss = 0.0;
  for (const auto &[fa, fb] : r.f1_pairs) ss += (fa - fb - mean) * (fa - fb - mean);
  const double t = mean / std::sqrt(ss / 99.0 / 100.0);
  EXPECT_NEAR(r.t_statistic, t, 1e-9 * std::max(1.0, std::abs(t)));
  EXPECT_NEAR(r.p_value, TwoTailedP(t, 99.0), 1e-8);
}

TEST(Bootstrap, MismatchedTweetSetsAreRejected) {
  const auto [a, b] = DominatingPair(10);
  const auto [c, d] = DominatingPair(11);
  EXPECT_THROW(BootstrapCompare(a, d, 100, 1), DataError);
  EXPECT_THROW(BootstrapCompare(a, b, 1, 1), std::invalid_argument);
}

TEST(LinksIo, RoundTrip) {
  testing::TempDir dir;
  const std::vector<TweetLinks> links{{"a", {L(0, 2, "Boston_Red_Sox"), L(3, 4, "E")}},
                                      {"b", {}}};
  SaveLinks(links, dir.File("p.jsonl"));
  EXPECT_EQ(LoadLinks(dir.File("p.jsonl")), links);
  testing::WriteText(dir.File("bad.jsonl"), "{\"id\":\"a\",\"links\":[[0,2]]}\n");
  EXPECT_THROW(LoadLinks(dir.File("bad.jsonl")), ParseError);
}

}  // namespace
}  // namespace sociolink
