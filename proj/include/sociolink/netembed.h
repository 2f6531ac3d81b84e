#ifndef SOCIOLINK_NETEMBED_H_
#define SOCIOLINK_NETEMBED_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sociolink/embeddings.h"
#include "sociolink/graph.h"

namespace sociolink {

// Walker's alias method: O(n) setup, O(1) draws from a discrete
// distribution given by non-negative weights.
class AliasSampler {
 public:
  AliasSampler() = default;
  explicit AliasSampler(std::span<const double> weights);

  // Draws an index using two uniforms in [0,1).
  std::size_t Sample(double u1, double u2) const;

  template <typename Rng>
  std::size_t operator()(Rng &rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u1 = unif(rng);
    const double u2 = unif(rng);
    return Sample(u1, u2);
  }

  std::size_t size() const { return prob_.size(); }

  // Probability mass of index i implied by the table.
  double Probability(std::size_t i) const;

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

struct NetEmbedConfig {
  int dim = 100;
  int negative_samples = 5;
  // 0 selects 1000 * |E|, capped at kMaxDefaultSamples.
  std::int64_t total_samples = 0;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;
  // 1 runs the deterministic single-threaded trainer. More threads apply
  // unsynchronized updates and are not reproducible.
  int threads = 1;

  static constexpr std::int64_t kMaxDefaultSamples = 100'000'000;

  std::int64_t ResolvedSamples(std::size_t num_edges) const;
};

// Second-order proximity embedding with negative sampling. Vertex and
// context vectors are trained jointly; the vertex vectors are returned, one
// row per graph node in node order.
EmbeddingTable TrainLine2(const SocialGraph &graph,
                          const NetEmbedConfig &config);

}  // namespace sociolink

#endif  // SOCIOLINK_NETEMBED_H_
