#include <gtest/gtest.h>

#include <random>

#include "sociolink/netembed.h"

namespace sociolink {
namespace {

double Cosine(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  return a.dot(b) / (a.norm() * b.norm());
}

SocialGraph Star(int leaves) {
  SocialGraph g;
  for (int i = 0; i < leaves; ++i) g.AddEdge("hub", "leaf" + std::to_string(i));
  return g;
}

SocialGraph TwoCliques(int size) {
  SocialGraph g;
  for (const std::string side : {"a", "b"}) {
    for (int i = 0; i < size; ++i) {
      for (int j = i + 1; j < size; ++j) {
        g.AddEdge(side + std::to_string(i), side + std::to_string(j));
      }
    }
  }
  return g;
}

NetEmbedConfig SmallConfig(std::uint64_t seed) {
  NetEmbedConfig c;
  c.dim = 16;
  c.seed = seed;
  return c;
}

TEST(Alias, ReproducesDistribution) {
  const std::vector<double> w{1.0, 0.0, 3.0, 6.0};
  AliasSampler s(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(s.Probability(i), w[i] / 10.0, 1e-12);
  }
  std::mt19937_64 rng(1);
  std::vector<int> hits(4);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[s(rng)];
  EXPECT_EQ(hits[1], 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(hits[i] / static_cast<double>(n), w[i] / 10.0, 0.005);
  }
}

TEST(Alias, RejectsBadWeights) {
  EXPECT_THROW(AliasSampler(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(AliasSampler(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(AliasSampler(std::vector<double>{1.0, -1.0}), std::invalid_argument);
}

TEST(Line, SingleEdgeIsDeterministic) {
  SocialGraph g;
  g.AddEdge("a", "b");
  const EmbeddingTable x = TrainLine2(g, SmallConfig(4));
  const EmbeddingTable y = TrainLine2(g, SmallConfig(4));
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.ids(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(x.dim(), 16);
  EXPECT_FALSE(x == TrainLine2(g, SmallConfig(5)));
}

TEST(Line, EmptyGraphIsError) {
  SocialGraph g;
  g.AddNode("a");
  EXPECT_THROW(TrainLine2(g, SmallConfig(1)), DataError);
}

TEST(Line, BadConfigIsRejected) {
  SocialGraph g;
  g.AddEdge("a", "b");
  NetEmbedConfig c = SmallConfig(1);
  c.negative_samples = 0;
  EXPECT_THROW(TrainLine2(g, c), std::invalid_argument);
  c = SmallConfig(1);
  c.initial_lr = 0.0;
  EXPECT_THROW(TrainLine2(g, c), std::invalid_argument);
}

TEST(Line, VectorsFiniteAndNonZero) {
  const SocialGraph g = TwoCliques(5);
  const EmbeddingTable t = TrainLine2(g, SmallConfig(2));
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_TRUE(t.Row(static_cast<int>(i)).allFinite());
    EXPECT_GT(t.Row(static_cast<int>(i)).norm(), 0.0);
  }
}

TEST(Line, DefaultSampleBudget) {
  NetEmbedConfig c;
  EXPECT_EQ(c.ResolvedSamples(7), 7000);
  EXPECT_EQ(c.ResolvedSamples(1'000'000), NetEmbedConfig::kMaxDefaultSamples);
  c.total_samples = 12;
  EXPECT_EQ(c.ResolvedSamples(7), 12);
}

// Leaves share the neighbourhood {hub}; leaves of an independent run are an
// unaligned baseline.
TEST(Line, StarLeavesEmbedTogether) {
  const SocialGraph g = Star(8);
  int passes = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const EmbeddingTable x = TrainLine2(g, SmallConfig(seed));
    const EmbeddingTable y = TrainLine2(g, SmallConfig(seed + 100));
    double within = 0.0, across = 0.0;
    int n = 0;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        if (i == j) continue;
        const std::string a = "leaf" + std::to_string(i);
        const std::string b = "leaf" + std::to_string(j);
        within += Cosine(x.Lookup(a), x.Lookup(b));
        across += Cosine(x.Lookup(a), y.Lookup(b));
        ++n;
      }
    }
    passes += within / n > across / n;
  }
  EXPECT_GE(passes, 9);
}

TEST(Line, CliquesSeparate) {
  const SocialGraph g = TwoCliques(5);
  int passes = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const EmbeddingTable t = TrainLine2(g, SmallConfig(seed));
    double within = 0.0, across = 0.0;
    int n_within = 0, n_across = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        const double c = Cosine(t.Row(static_cast<int>(i)), t.Row(static_cast<int>(j)));
        if (t.ids()[i][0] == t.ids()[j][0]) {
          within += c;
          ++n_within;
        } else {
          across += c;
          ++n_across;
        }
      }
    }
    passes += within / n_within > across / n_across;
  }
  EXPECT_GE(passes, 9);
}

}  // namespace
}  // namespace sociolink
