#include "sociolink/features.h"

#include <cmath>
#include <stdexcept>

namespace sociolink {

std::string CanonicalName(const EntityId &entity) {
  std::string name = entity;
  if (!name.empty() && name.back() == ')') {
    const std::size_t open = name.rfind('(');
    if (open != std::string::npos && open > 0) name.erase(open);
  }
  for (char &c : name) {
    if (c == '_') c = ' ';
  }
  while (!name.empty() && name.back() == ' ') name.pop_back();
  return ToLower(std::move(name));
}

Eigen::VectorXd DefaultFeatureExtractor::Extract(
    const Tweet & /*tweet*/, const MentionCandidate &candidate,
    int label) const {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(kDim);
  const bool nil = label == kNil;
  if (!nil) {
    phi[0] = candidate.priors.at(label);
    phi[3] = CanonicalName(candidate.candidates.at(label)) == candidate.surface
                 ? 1.0
                 : 0.0;
  }
  phi[1] = std::log(static_cast<double>(candidate.candidates.size()));
  phi[2] = static_cast<double>(candidate.span.length());
  phi[4] = nil ? 1.0 : 0.0;
  phi[5] = 1.0;
  return phi;
}

std::shared_ptr<const FeatureExtractor> MakeFeatureExtractor(
    const std::string &name) {
  if (name == DefaultFeatureExtractor::kName) {
    return std::make_shared<DefaultFeatureExtractor>();
  }
  throw std::invalid_argument("unknown feature set '" + name + "'");
}

}  // namespace sociolink
