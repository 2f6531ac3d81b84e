#ifndef SOCIOLINK_SYNTHETIC_H_
#define SOCIOLINK_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <vector>

#include "sociolink/corpus.h"
#include "sociolink/embeddings.h"
#include "sociolink/graph.h"

namespace sociolink {

// Desk-scale corpus with planted entity homophily.
//
// Users and entities are split round-robin into communities. Users mostly
// mention entities of their own community and are mostly linked to users of
// their own community. A fraction `ambiguity` of the entities is grouped so
// that each group (one entity per community) shares one surface form with
// equal priors; for those mentions only the author's community tells the
// entities apart. Entity vectors cluster by community.
struct SynthConfig {
  int users = 60;
  int entities = 40;
  int communities = 2;
  int tweets_per_user = 12;
  double ambiguity = 0.5;
  // Probability that a mention names an entity of the author's community.
  double community_affinity = 0.9;
  double edge_prob_in = 0.25;
  double edge_prob_out = 0.01;
  int max_mentions_per_tweet = 2;
  // Fraction of entity names with two tokens.
  double multiword_rate = 0.5;
  int filler_vocab = 150;
  // Filler words that are also lexicon keys (always Nil in gold).
  int noise_surfaces = 20;
  int word_dim = 50;
  int entity_dim = 50;
  // Spread of entity vectors around their community centroid.
  double entity_noise = 0.5;

  // Throws std::invalid_argument.
  void Validate() const;
};

struct SyntheticData {
  std::vector<Tweet> tweets;
  Lexicon lexicon;
  SocialGraph graph;
  EmbeddingTable words{EmbeddingKind::kWord, 1};
  EmbeddingTable entities{EmbeddingKind::kEntity, 1};
  std::map<UserId, int> user_community;
  std::map<EntityId, int> entity_community;
};

// Deterministic for a given (config, seed).
SyntheticData GenerateSynthetic(const SynthConfig &config, std::uint64_t seed);

}  // namespace sociolink

#endif  // SOCIOLINK_SYNTHETIC_H_
