#ifndef SOCIOLINK_HOMOPHILY_H_
#define SOCIOLINK_HOMOPHILY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sociolink/corpus.h"
#include "sociolink/graph.h"

namespace sociolink {

// Binary user -> entity incidence. `entities` is sorted and unique.
struct UserEntityProfile {
  UserId user;
  std::vector<EntityId> entities;

  UserEntityProfile() = default;
  UserEntityProfile(UserId u, std::vector<EntityId> e);
};

// Cosine of binary incidence vectors: |A n B| / sqrt(|A| |B|); 0 if either
// set is empty.
double EntitySimilarity(const UserEntityProfile &a, const UserEntityProfile &b);

struct HomophilyOptions {
  // Exact enumeration of non-adjacent pairs below this many nodes.
  std::size_t exact_node_limit = 3000;
  std::int64_t sample_pairs = 1'000'000;
  std::uint64_t seed = 1;
};

struct HomophilyReport {
  double sim_connected = 0.0;
  double sim_disconnected = 0.0;
  // Standard errors of the two means.
  double se_connected = 0.0;
  double se_disconnected = 0.0;
  std::int64_t connected_pairs = 0;
  std::int64_t disconnected_pairs = 0;  // pairs averaged (sampled or exact)
  bool exact = true;
  // Graph nodes without a profile; they score as empty sets.
  std::vector<UserId> missing_profiles;

  double ratio() const;
  // Standard error of sim_connected - sim_disconnected.
  double se_difference() const;
};

// Throws DataError if the graph has no edges.
HomophilyReport ComputeHomophily(const SocialGraph &graph,
                                 const std::vector<UserEntityProfile> &profiles,
                                 const HomophilyOptions &options = {});

// Profiles from gold annotations, one per author, in first-seen order.
std::vector<UserEntityProfile> ProfilesFromCorpus(
    const std::vector<Tweet> &tweets);

// TSV "<user_id>\t<entity_id>" per line (any whitespace accepted).
std::vector<UserEntityProfile> LoadProfiles(const std::string &path);
void SaveProfiles(const std::vector<UserEntityProfile> &profiles,
                  const std::string &path);

}  // namespace sociolink

#endif  // SOCIOLINK_HOMOPHILY_H_
