#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sociolink/homophily.h"
#include "sociolink/synthetic.h"
#include "test_support.h"

namespace sociolink {
namespace {

UserEntityProfile P(const std::string &user, std::vector<EntityId> entities) {
  return UserEntityProfile(user, std::move(entities));
}

// Direct O(n^2) means over all pairs.
std::pair<double, double> BruteForceMeans(
    const SocialGraph &g, const std::vector<UserEntityProfile> &profiles) {
  std::map<UserId, UserEntityProfile> by_user;
  for (const auto &p : profiles) by_user[p.user] = p;
  double conn = 0.0, disc = 0.0;
  int n_conn = 0, n_disc = 0;
  const int n = static_cast<int>(g.num_nodes());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double s = EntitySimilarity(by_user[g.nodes()[a]], by_user[g.nodes()[b]]);
      if (g.HasEdge(a, b)) {
        conn += s;
        ++n_conn;
      } else {
        disc += s;
        ++n_disc;
      }
    }
  }
  return {conn / n_conn, n_disc == 0 ? 0.0 : disc / n_disc};
}

TEST(Similarity, Examples) {
  EXPECT_EQ(EntitySimilarity(P("a", {"e1", "e2"}), P("b", {"e2", "e1"})), 1.0);
  EXPECT_EQ(EntitySimilarity(P("a", {"e1"}), P("b", {"e2"})), 0.0);
  EXPECT_NEAR(EntitySimilarity(P("a", {"e1", "e2"}), P("b", {"e2", "e3", "e4"})),
              1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(1.0 / std::sqrt(6.0), 0.4082, 5e-5);
  EXPECT_EQ(EntitySimilarity(P("a", {}), P("b", {"e1"})), 0.0);
}

TEST(Similarity, ProfileIsASet) {
  const UserEntityProfile p = P("a", {"e2", "e1", "e2"});
  EXPECT_EQ(p.entities, (std::vector<EntityId>{"e1", "e2"}));
}

TEST(Similarity, SymmetricAndBounded) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<EntityId> a, b;
    for (int i = 0; i < 6; ++i) {
      if (rng() % 2) a.push_back("e" + std::to_string(i));
      if (rng() % 2) b.push_back("e" + std::to_string(i));
    }
    const double ab = EntitySimilarity(P("a", a), P("b", b));
    EXPECT_EQ(ab, EntitySimilarity(P("b", b), P("a", a)));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-15);
  }
}

TEST(Report, CliqueAndIsolatedNode) {
  SocialGraph g;
  g.AddEdge("a", "b");
  g.AddNode("c");
  const auto r = ComputeHomophily(g, {P("a", {"e1"}), P("b", {"e1"}), P("c", {"e9"})});
  EXPECT_EQ(r.sim_connected, 1.0);
  EXPECT_EQ(r.sim_disconnected, 0.0);
  EXPECT_EQ(r.connected_pairs, 1);
  EXPECT_EQ(r.disconnected_pairs, 2);
  EXPECT_TRUE(r.exact);
}

TEST(Report, IdenticalProfilesGiveOne) {
  SocialGraph g;
  g.AddEdge("a", "b");
  g.AddEdge("b", "c");
  const auto r = ComputeHomophily(
      g, {P("a", {"e1", "e2"}), P("b", {"e1", "e2"}), P("c", {"e1", "e2"})});
  EXPECT_DOUBLE_EQ(r.sim_connected, 1.0);
  EXPECT_DOUBLE_EQ(r.sim_disconnected, 1.0);
}

TEST(Report, NoEdgesIsError) {
  SocialGraph g;
  g.AddNode("a");
  EXPECT_THROW(ComputeHomophily(g, {}), DataError);
}

TEST(Report, MissingProfilesAreEmptyAndReported) {
  SocialGraph g;
  g.AddEdge("a", "b");
  g.AddEdge("a", "c");
  const auto r = ComputeHomophily(g, {P("a", {"e1"}), P("b", {"e1"})});
  EXPECT_EQ(r.missing_profiles, std::vector<UserId>{"c"});
  EXPECT_DOUBLE_EQ(r.sim_connected, 0.5);
}

TEST(Report, ExactMatchesBruteForce) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    SocialGraph g;
    std::vector<UserEntityProfile> profiles;
    const int n = 4 + static_cast<int>(rng() % 10);
    for (int u = 0; u < n; ++u) {
      const std::string id = "u" + std::to_string(u);
      g.AddNode(id);
      std::vector<EntityId> ents;
      for (int e = 0; e < 5; ++e) {
        if (rng() % 3 == 0) ents.push_back("e" + std::to_string(e));
      }
      profiles.push_back(P(id, ents));
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng() % 3 == 0) g.AddEdge("u" + std::to_string(a), "u" + std::to_string(b));
      }
    }
    if (g.num_edges() == 0) continue;
    const auto r = ComputeHomophily(g, profiles);
    const auto [conn, disc] = BruteForceMeans(g, profiles);
    EXPECT_NEAR(r.sim_connected, conn, 1e-12);
    EXPECT_NEAR(r.sim_disconnected, disc, 1e-12);
  }
}

TEST(Report, DroppingDissimilarEdgesNeverLowersConnectedMean) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    SocialGraph g, pruned;
    std::vector<UserEntityProfile> profiles;
    const int n = 8;
    for (int u = 0; u < n; ++u) {
      const std::string id = "u" + std::to_string(u);
      g.AddNode(id);
      pruned.AddNode(id);
      std::vector<EntityId> ents;
      for (int e = 0; e < 4; ++e) {
        if (rng() % 3 == 0) ents.push_back("e" + std::to_string(e));
      }
      profiles.push_back(P(id, ents));
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng() % 2 != 0) continue;
        g.AddEdge(profiles[a].user, profiles[b].user);
        if (EntitySimilarity(profiles[a], profiles[b]) > 0.0) {
          pruned.AddEdge(profiles[a].user, profiles[b].user);
        }
      }
    }
    if (pruned.num_edges() == 0) continue;
    EXPECT_GE(ComputeHomophily(pruned, profiles).sim_connected,
              ComputeHomophily(g, profiles).sim_connected);
  }
}

TEST(Report, SampledModeApproximatesExact) {
  SynthConfig cfg;
  const SyntheticData data = GenerateSynthetic(cfg, 3);
  const auto profiles = ProfilesFromCorpus(data.tweets);
  const auto exact = ComputeHomophily(data.graph, profiles);
  HomophilyOptions options;
  options.exact_node_limit = 10;
  options.sample_pairs = 200000;
  const auto sampled = ComputeHomophily(data.graph, profiles, options);
  EXPECT_FALSE(sampled.exact);
  EXPECT_EQ(sampled.disconnected_pairs, 200000);
  EXPECT_NEAR(sampled.sim_disconnected, exact.sim_disconnected,
              4.0 * sampled.se_disconnected);
  EXPECT_EQ(sampled.sim_connected, exact.sim_connected);
}

TEST(Report, TwoCommunitiesShowHomophily) {
  const SyntheticData data = GenerateSynthetic(SynthConfig{}, 1);
  const auto r = ComputeHomophily(data.graph, ProfilesFromCorpus(data.tweets));
  EXPECT_GT(r.sim_connected, r.sim_disconnected);
}

TEST(Report, FourCommunitiesDoubleTheSimilarity) {
  SynthConfig cfg;
  cfg.communities = 4;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SyntheticData data = GenerateSynthetic(cfg, seed);
    const auto r = ComputeHomophily(data.graph, ProfilesFromCorpus(data.tweets));
    EXPECT_GT(r.sim_connected, 2.0 * r.sim_disconnected) << "seed " << seed;
  }
}

TEST(Report, NullModelShowsNoGap) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SocialGraph g;
  std::vector<UserEntityProfile> profiles;
  const int n = 200;
  for (int u = 0; u < n; ++u) {
    const std::string id = "u" + std::to_string(u);
    g.AddNode(id);
    std::vector<EntityId> ents;
    for (int e = 0; e < 30; ++e) {
      if (unif(rng) < 0.1) ents.push_back("e" + std::to_string(e));
    }
    profiles.push_back(P(id, ents));
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (unif(rng) < 0.05) g.AddEdge(profiles[a].user, profiles[b].user);
    }
  }
  const auto r = ComputeHomophily(g, profiles);
  EXPECT_LT(std::abs(r.sim_connected - r.sim_disconnected), 3.0 * r.se_difference());
}

TEST(ProfilesIo, RoundTripAndCorpusExtraction) {
  testing::TempDir dir;
  Tweet t;
  t.id = "1";
  t.author = "u1";
  t.tokens = {"a", "b"};
  t.gold = {{{0, 1}, "E2"}, {{1, 2}, "E1"}};
  Tweet t2 = t;
  t2.id = "2";
  t2.author = "u2";
  t2.gold = {};
  const auto profiles = ProfilesFromCorpus({t, t2});
  ASSERT_EQ(profiles.size(), 2u);
  EXPECT_EQ(profiles[0].entities, (std::vector<EntityId>{"E1", "E2"}));
  EXPECT_TRUE(profiles[1].entities.empty());
  SaveProfiles(profiles, dir.File("p.tsv"));
  const auto back = LoadProfiles(dir.File("p.tsv"));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].user, "u1");
  EXPECT_EQ(back[0].entities, profiles[0].entities);
  testing::WriteText(dir.File("bad.tsv"), "u1 E1\nu2\n");
  EXPECT_THROW(LoadProfiles(dir.File("bad.tsv")), ParseError);
}

}  // namespace
}  // namespace sociolink
