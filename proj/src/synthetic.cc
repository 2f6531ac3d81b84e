#include "sociolink/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sociolink {

void SynthConfig::Validate() const {
  if (users <= 0) throw std::invalid_argument("synthetic config: users must be > 0");
  if (entities <= 0) {
    throw std::invalid_argument("synthetic config: entities must be > 0");
  }
  if (communities <= 0 || communities > entities || communities > users) {
    throw std::invalid_argument(
        "synthetic config: communities must be in [1, min(users, entities)]");
  }
  if (tweets_per_user < 0 || max_mentions_per_tweet < 1) {
    throw std::invalid_argument("synthetic config: bad tweet counts");
  }
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(ambiguity) || !prob(community_affinity) || !prob(edge_prob_in) ||
      !prob(edge_prob_out) || !prob(multiword_rate)) {
    throw std::invalid_argument("synthetic config: probabilities must be in [0,1]");
  }
  if (filler_vocab < 1 || noise_surfaces < 0 || noise_surfaces > filler_vocab) {
    throw std::invalid_argument("synthetic config: bad vocabulary sizes");
  }
  if (word_dim <= 0 || entity_dim <= 0 || entity_noise < 0.0) {
    throw std::invalid_argument("synthetic config: bad embedding settings");
  }
}

namespace {

// Unique pronounceable word for each index: base-70 digits over CV syllables,
// offset so that every word has at least two syllables.
std::string MakeWord(int index) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  const int base = static_cast<int>(kConsonants.size() * kVowels.size());
  int n = index + base;
  std::string word;
  while (n > 0) {
    const int s = n % base;
    word.insert(0, {kConsonants[s / kVowels.size()], kVowels[s % kVowels.size()]});
    n /= base;
  }
  return word;
}

Eigen::VectorXd Gaussian(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int k = 0; k < dim; ++k) v[k] = normal(rng);
  return v;
}

std::string PaddedId(char prefix, int i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return std::string(1, prefix) + digits;
}

}  // namespace

SyntheticData GenerateSynthetic(const SynthConfig &config, std::uint64_t seed) {
  config.Validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int k_comm = config.communities;
  SyntheticData data;

  int next_word = 0;
  std::vector<std::string> filler;
  for (int i = 0; i < config.filler_vocab; ++i) filler.push_back(MakeWord(next_word++));

  // Entity names. Entity i belongs to community i % K; ambiguous groups take
  // consecutive indices so each group spans distinct communities.
  const int group_size = std::max(2, k_comm);
  const int n_ambiguous =
      std::min(config.entities,
               static_cast<int>(config.ambiguity * config.entities)) /
      group_size * group_size;

  std::vector<std::vector<std::string>> entity_tokens(config.entities);
  std::vector<EntityId> entity_ids(config.entities);
  std::vector<std::vector<int>> by_community(k_comm);
  auto fresh_name = [&] {
    std::vector<std::string> tokens{MakeWord(next_word++)};
    if (unif(rng) < config.multiword_rate) tokens.push_back(MakeWord(next_word++));
    return tokens;
  };
  auto id_of = [](const std::vector<std::string> &tokens) {
    std::string id;
    for (const auto &t : tokens) id += (id.empty() ? "" : "_") + t;
    return id;
  };

  struct Surface {
    std::string text;
    std::vector<LexiconEntry> entries;
  };
  std::vector<Surface> surfaces;
  for (int g = 0; g < n_ambiguous / group_size; ++g) {
    const auto tokens = fresh_name();
    Surface s{JoinTokens(tokens, 0, static_cast<int>(tokens.size())), {}};
    for (int m = 0; m < group_size; ++m) {
      const int e = g * group_size + m;
      entity_tokens[e] = tokens;
      entity_ids[e] = id_of(tokens) + "_(" + std::to_string(m + 1) + ")";
      s.entries.push_back({entity_ids[e], 1.0 / group_size});
    }
    surfaces.push_back(std::move(s));
  }
  for (int e = n_ambiguous; e < config.entities; ++e) {
    entity_tokens[e] = fresh_name();
    entity_ids[e] = id_of(entity_tokens[e]);
    surfaces.push_back(
        {JoinTokens(entity_tokens[e], 0, static_cast<int>(entity_tokens[e].size())),
         {{entity_ids[e], 0.6 + 0.4 * unif(rng)}}});
  }
  for (int e = 0; e < config.entities; ++e) {
    by_community[e % k_comm].push_back(e);
    data.entity_community[entity_ids[e]] = e % k_comm;
  }

  // Low-prior lexicon keys whose gold label is always Nil: the first token of
  // each two-token name and some filler words.
  std::uniform_int_distribution<int> any_entity(0, config.entities - 1);
  auto noise_entry = [&] {
    return std::vector<LexiconEntry>{
        {entity_ids[any_entity(rng)], 0.02 + 0.13 * unif(rng)}};
  };
  for (int e = 0; e < config.entities; ++e) {
    const bool group_head = e < n_ambiguous ? e % group_size == 0 : true;
    if (entity_tokens[e].size() > 1 && group_head) {
      surfaces.push_back({entity_tokens[e][0], noise_entry()});
    }
  }
  {
    std::vector<int> pick(filler.size());
    std::iota(pick.begin(), pick.end(), 0);
    std::shuffle(pick.begin(), pick.end(), rng);
    for (int i = 0; i < config.noise_surfaces; ++i) {
      surfaces.push_back({filler[pick[i]], noise_entry()});
    }
  }
  for (auto &s : surfaces) data.lexicon.Add(s.text, std::move(s.entries));

  // Social graph: planted partition over users (community = index % K).
  std::vector<UserId> users(config.users);
  for (int u = 0; u < config.users; ++u) {
    users[u] = PaddedId('u', u);
    data.user_community[users[u]] = u % k_comm;
    data.graph.AddNode(users[u]);
  }
  for (int a = 0; a < config.users; ++a) {
    for (int b = a + 1; b < config.users; ++b) {
      const double p =
          a % k_comm == b % k_comm ? config.edge_prob_in : config.edge_prob_out;
      if (unif(rng) < p) data.graph.AddEdge(users[a], users[b]);
    }
  }
  for (int a = 0; a < config.users; ++a) {
    if (!data.graph.neighbors(a).empty() || config.users / k_comm < 2) continue;
    // Attach isolated users to a random member of their community.
    std::uniform_int_distribution<int> mate(0, config.users / k_comm - 1);
    int b = a;
    while (b == a) b = mate(rng) * k_comm + a % k_comm;
    if (b < config.users) data.graph.AddEdge(users[a], users[b]);
  }

  // Tweets.
  std::uniform_int_distribution<int> gap(1, 4);
  std::uniform_int_distribution<int> n_mentions(1, config.max_mentions_per_tweet);
  std::uniform_int_distribution<int> filler_word(0, config.filler_vocab - 1);
  std::uniform_int_distribution<int> other_comm(0, std::max(0, k_comm - 2));
  for (int u = 0; u < config.users; ++u) {
    const int home = u % k_comm;
    for (int i = 0; i < config.tweets_per_user; ++i) {
      Tweet t;
      t.id = users[u] + "-" + PaddedId('t', i);
      t.author = users[u];
      auto add_filler = [&] {
        for (int g = gap(rng); g > 0; --g) t.tokens.push_back(filler[filler_word(rng)]);
      };
      add_filler();
      for (int m = n_mentions(rng); m > 0; --m) {
        int comm = home;
        if (k_comm > 1 && unif(rng) >= config.community_affinity) {
          comm = other_comm(rng);
          if (comm >= home) ++comm;
        }
        const auto &pool = by_community[comm];
        std::uniform_int_distribution<std::size_t> which(0, pool.size() - 1);
        const int e = pool[which(rng)];
        Annotation a;
        a.span.start = static_cast<int>(t.tokens.size());
        for (const auto &tok : entity_tokens[e]) t.tokens.push_back(tok);
        a.span.end = static_cast<int>(t.tokens.size());
        a.entity = entity_ids[e];
        t.gold.push_back(std::move(a));
        add_filler();
      }
      data.tweets.push_back(std::move(t));
    }
  }

  // Embeddings.
  data.words = EmbeddingTable(EmbeddingKind::kWord, config.word_dim);
  const double word_scale = 1.0 / std::sqrt(static_cast<double>(config.word_dim));
  for (int w = 0; w < next_word; ++w) {
    const Eigen::VectorXd v = Gaussian(config.word_dim, rng) * word_scale;
    data.words.Add(MakeWord(w), std::span<const double>(v.data(), v.size()));
  }
  data.entities = EmbeddingTable(EmbeddingKind::kEntity, config.entity_dim);
  std::vector<Eigen::VectorXd> centroids;
  for (int c = 0; c < k_comm; ++c) {
    centroids.push_back(Gaussian(config.entity_dim, rng).normalized());
  }
  const double entity_scale =
      config.entity_noise / std::sqrt(static_cast<double>(config.entity_dim));
  for (int e = 0; e < config.entities; ++e) {
    Eigen::VectorXd v = centroids[e % k_comm] +
                        Gaussian(config.entity_dim, rng) * entity_scale;
    v.normalize();
    data.entities.Add(entity_ids[e], std::span<const double>(v.data(), v.size()));
  }
  return data;
}

}  // namespace sociolink
