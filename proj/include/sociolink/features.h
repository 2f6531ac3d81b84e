#ifndef SOCIOLINK_FEATURES_H_
#define SOCIOLINK_FEATURES_H_

#include <memory>
#include <string>

#include <Eigen/Core>

#include "sociolink/corpus.h"

namespace sociolink {

// Surface feature function phi(x, y_t, t). `label` is an index into
// candidate.candidates or kNil. Implementations must be deterministic and
// return exactly dim() finite values.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual Eigen::VectorXd Extract(const Tweet &tweet,
                                  const MentionCandidate &candidate,
                                  int label) const = 0;
};

// The built-in six-feature set:
//   0  lexicon prior of (surface, entity); 0 for Nil
//   1  log of the candidate-list length
//   2  mention length in tokens
//   3  1 if the surface equals the entity's canonical name; 0 for Nil
//   4  1 for Nil, else 0
//   5  constant 1
class DefaultFeatureExtractor : public FeatureExtractor {
 public:
  static constexpr int kDim = 6;
  static constexpr const char *kName = "default";

  int dim() const override { return kDim; }
  std::string name() const override { return kName; }
  Eigen::VectorXd Extract(const Tweet &tweet, const MentionCandidate &candidate,
                          int label) const override;
};

// Entity id -> lowercased name: underscores become spaces and a trailing
// parenthesized qualifier is dropped ("Mercury_(planet)" -> "mercury").
std::string CanonicalName(const EntityId &entity);

// Throws std::invalid_argument for unknown names.
std::shared_ptr<const FeatureExtractor> MakeFeatureExtractor(
    const std::string &name);

}  // namespace sociolink

#endif  // SOCIOLINK_FEATURES_H_
