#ifndef SOCIOLINK_SCORER_H_
#define SOCIOLINK_SCORER_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sociolink/corpus.h"
#include "sociolink/embeddings.h"
#include "sociolink/features.h"

namespace sociolink {

// Surface-feature MLP: beta' tanh(W phi + b) + b_out.
struct MlpParams {
  Eigen::MatrixXd W;     // M x D
  Eigen::VectorXd b;     // M
  Eigen::VectorXd beta;  // M
  double b_out = 0.0;
};

// Bilinear compositions v_u' W_ue v_e and v_m' W_me v_e.
struct CompositionParams {
  Eigen::MatrixXd W_ue;  // D_user x D_entity
  Eigen::MatrixXd W_me;  // D_word x D_entity
};

// All scoring state. Embedding tables and the feature extractor are shared
// and frozen; copying a Model copies only the learnable parameters.
struct Model {
  MlpParams mlp;
  CompositionParams comp;
  std::shared_ptr<const EmbeddingTable> users;
  std::shared_ptr<const EmbeddingTable> words;
  std::shared_ptr<const EmbeddingTable> entities;
  std::shared_ptr<const FeatureExtractor> features;
  bool use_user_entity = true;
  bool use_mention_entity = true;

  int hidden() const { return static_cast<int>(mlp.W.rows()); }
  int feature_dim() const { return static_cast<int>(mlp.W.cols()); }
};

struct ModelOptions {
  int hidden = 40;
  bool use_user_entity = true;
  bool use_mention_entity = true;
  std::uint64_t seed = 1;
};

// Glorot-uniform init: each matrix and vector uniform in
// +-sqrt(6 / (fan_in + fan_out)). Disabled composition matrices are zero.
Model InitModel(std::shared_ptr<const EmbeddingTable> users,
                std::shared_ptr<const EmbeddingTable> words,
                std::shared_ptr<const EmbeddingTable> entities,
                std::shared_ptr<const FeatureExtractor> features,
                const ModelOptions &options);

// Same shape, every learnable parameter zero.
struct Gradients {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
  Eigen::VectorXd beta;
  double b_out = 0.0;
  Eigen::MatrixXd W_ue;
  Eigen::MatrixXd W_me;

  static Gradients Zero(const Model &model);
  Gradients &operator+=(const Gradients &other);
  Gradients &operator*=(double scale);
  double MaxAbs() const;
};

double ScoreG1(const Model &model, const Tweet &tweet,
               const MentionCandidate &candidate, int label);
// 0 for Nil; unknown users, words and entities contribute zero vectors.
double ScoreG2(const Model &model, const Tweet &tweet,
               const MentionCandidate &candidate, int label,
               const UserId &user);
double ScoreG(const Model &model, const Tweet &tweet,
              const MentionCandidate &candidate, int label,
              const UserId &user);

// Sum over candidates of ScoreG. Throws std::invalid_argument on a length
// mismatch or an out-of-range label.
double ScoreMessage(const Model &model, const Tweet &tweet,
                    const std::vector<MentionCandidate> &candidates,
                    const Assignment &assignment, const UserId &user);

// d ScoreMessage / d theta scaled by upstream_weight. Embedding tables get no
// gradient; disabled composition terms get an all-zero gradient.
Gradients Backward(const Model &model, const Tweet &tweet,
                   const std::vector<MentionCandidate> &candidates,
                   const Assignment &assignment, const UserId &user,
                   double upstream_weight);

// Model file layout (all text, UTF-8):
//
//   sociolink-model 1
//   features <name>
//   hidden <M>
//   feature_dim <D>
//   user_dim <Du>
//   word_dim <Dw>
//   entity_dim <De>
//   use_user_entity <0|1>
//   use_mention_entity <0|1>
//   end
//   @<name> <kind>
//   <rows> <cols>
//   <row_label> <v1> ... <vcols>
//   ...
//
// Blocks, in order: mlp.W, mlp.b, mlp.beta, mlp.b_out, comp.W_ue, comp.W_me
// (kind "param", rows labelled by index), then embeddings.user,
// embeddings.word, embeddings.entity (kind "table", rows labelled by id).
// Vectors are one column; b_out is 1 x 1. Values use the shortest exact
// decimal form, so a save/load cycle reproduces the model bit for bit.
void SaveModel(const Model &model, const std::string &path);
void WriteModel(const Model &model, std::ostream &out);
Model LoadModel(const std::string &path);
Model ReadModel(std::istream &in, const std::string &source);

}  // namespace sociolink

#endif  // SOCIOLINK_SCORER_H_
