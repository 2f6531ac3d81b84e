#include "sociolink/scorer.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sociolink {

namespace {

void FillUniform(Eigen::Ref<Eigen::MatrixXd> m, double limit,
                 std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
  }
}

double GlorotLimit(Eigen::Index fan_in, Eigen::Index fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void CheckLabel(const MentionCandidate &candidate, int label) {
  if (label != kNil &&
      (label < 0 || label >= static_cast<int>(candidate.candidates.size()))) {
    throw std::invalid_argument("label " + std::to_string(label) +
                                " out of range for candidate '" +
                                candidate.surface + "'");
  }
}

Eigen::VectorXd Features(const Model &model, const Tweet &tweet,
                         const MentionCandidate &candidate, int label) {
  Eigen::VectorXd phi = model.features->Extract(tweet, candidate, label);
  if (phi.size() != model.feature_dim()) {
    throw std::invalid_argument("feature vector has length " +
                                std::to_string(phi.size()) + ", expected " +
                                std::to_string(model.feature_dim()));
  }
  return phi;
}

void CheckAssignment(const std::vector<MentionCandidate> &candidates,
                     const Assignment &assignment) {
  if (assignment.size() != candidates.size()) {
    throw std::invalid_argument("assignment has " +
                                std::to_string(assignment.size()) +
                                " labels for " +
                                std::to_string(candidates.size()) +
                                " candidates");
  }
}

}  // namespace

Model InitModel(std::shared_ptr<const EmbeddingTable> users,
                std::shared_ptr<const EmbeddingTable> words,
                std::shared_ptr<const EmbeddingTable> entities,
                std::shared_ptr<const FeatureExtractor> features,
                const ModelOptions &options) {
  if (!users || !words || !entities || !features) {
    throw std::invalid_argument("model needs all embedding tables and features");
  }
  if (users->kind() != EmbeddingKind::kUser ||
      words->kind() != EmbeddingKind::kWord ||
      entities->kind() != EmbeddingKind::kEntity) {
    throw std::invalid_argument("embedding table kinds do not match roles");
  }
  if (options.hidden <= 0) throw std::invalid_argument("hidden size must be > 0");

  Model model;
  model.users = std::move(users);
  model.words = std::move(words);
  model.entities = std::move(entities);
  model.features = std::move(features);
  model.use_user_entity = options.use_user_entity;
  model.use_mention_entity = options.use_mention_entity;

  const int m = options.hidden;
  const int d = model.features->dim();
  std::mt19937_64 rng(options.seed);
  model.mlp.W.resize(m, d);
  FillUniform(model.mlp.W, GlorotLimit(d, m), rng);
  model.mlp.b.resize(m);
  FillUniform(model.mlp.b, GlorotLimit(d, m), rng);
  model.mlp.beta.resize(m);
  FillUniform(model.mlp.beta, GlorotLimit(m, 1), rng);
  model.mlp.b_out = 0.0;

  const int du = model.users->dim();
  const int dw = model.words->dim();
  const int de = model.entities->dim();
  model.comp.W_ue = Eigen::MatrixXd::Zero(du, de);
  model.comp.W_me = Eigen::MatrixXd::Zero(dw, de);
  if (model.use_user_entity) {
    FillUniform(model.comp.W_ue, GlorotLimit(du, de), rng);
  }
  if (model.use_mention_entity) {
    FillUniform(model.comp.W_me, GlorotLimit(dw, de), rng);
  }
  return model;
}

Gradients Gradients::Zero(const Model &model) {
  Gradients g;
  g.W = Eigen::MatrixXd::Zero(model.mlp.W.rows(), model.mlp.W.cols());
  g.b = Eigen::VectorXd::Zero(model.mlp.b.size());
  g.beta = Eigen::VectorXd::Zero(model.mlp.beta.size());
  g.b_out = 0.0;
  g.W_ue = Eigen::MatrixXd::Zero(model.comp.W_ue.rows(), model.comp.W_ue.cols());
  g.W_me = Eigen::MatrixXd::Zero(model.comp.W_me.rows(), model.comp.W_me.cols());
  return g;
}

Gradients &Gradients::operator+=(const Gradients &other) {
  W += other.W;
  b += other.b;
  beta += other.beta;
  b_out += other.b_out;
  W_ue += other.W_ue;
  W_me += other.W_me;
  return *this;
}

Gradients &Gradients::operator*=(double scale) {
  W *= scale;
  b *= scale;
  beta *= scale;
  b_out *= scale;
  W_ue *= scale;
  W_me *= scale;
  return *this;
}

double Gradients::MaxAbs() const {
  double m = std::abs(b_out);
  auto upd = [&m](const auto &x) {
    if (x.size() > 0) m = std::max(m, x.cwiseAbs().maxCoeff());
  };
  upd(W);
  upd(b);
  upd(beta);
  upd(W_ue);
  upd(W_me);
  return m;
}

double ScoreG1(const Model &model, const Tweet &tweet,
               const MentionCandidate &candidate, int label) {
  CheckLabel(candidate, label);
  const Eigen::VectorXd phi = Features(model, tweet, candidate, label);
  const Eigen::VectorXd h =
      (model.mlp.W * phi + model.mlp.b).array().tanh().matrix();
  return model.mlp.beta.dot(h) + model.mlp.b_out;
}

double ScoreG2(const Model &model, const Tweet & /*tweet*/,
               const MentionCandidate &candidate, int label,
               const UserId &user) {
  CheckLabel(candidate, label);
  if (label == kNil) return 0.0;
  const Eigen::VectorXd entity =
      model.entities->Lookup(candidate.candidates[label]);
  double score = 0.0;
  if (model.use_user_entity) {
    score += model.users->Lookup(user).dot(model.comp.W_ue * entity);
  }
  if (model.use_mention_entity) {
    score += MentionVector(candidate, *model.words).dot(model.comp.W_me * entity);
  }
  return score;
}

double ScoreG(const Model &model, const Tweet &tweet,
              const MentionCandidate &candidate, int label,
              const UserId &user) {
  return ScoreG1(model, tweet, candidate, label) +
         ScoreG2(model, tweet, candidate, label, user);
}

double ScoreMessage(const Model &model, const Tweet &tweet,
                    const std::vector<MentionCandidate> &candidates,
                    const Assignment &assignment, const UserId &user) {
  CheckAssignment(candidates, assignment);
  double total = 0.0;
  for (std::size_t t = 0; t < candidates.size(); ++t) {
    total += ScoreG(model, tweet, candidates[t], assignment.labels[t], user);
  }
  return total;
}

Gradients Backward(const Model &model, const Tweet &tweet,
                   const std::vector<MentionCandidate> &candidates,
                   const Assignment &assignment, const UserId &user,
                   double upstream_weight) {
  CheckAssignment(candidates, assignment);
  Gradients grad = Gradients::Zero(model);
  if (upstream_weight == 0.0) return grad;
  Eigen::VectorXd user_vec;
  if (model.use_user_entity) user_vec = model.users->Lookup(user);

  for (std::size_t t = 0; t < candidates.size(); ++t) {
    const MentionCandidate &c = candidates[t];
    const int label = assignment.labels[t];
    CheckLabel(c, label);

    const Eigen::VectorXd phi = Features(model, tweet, c, label);
    const Eigen::VectorXd h =
        (model.mlp.W * phi + model.mlp.b).array().tanh().matrix();
    grad.beta += upstream_weight * h;
    grad.b_out += upstream_weight;
    // d/dz of beta' tanh(z) is beta * (1 - tanh(z)^2).
    const Eigen::VectorXd dz =
        upstream_weight *
        (model.mlp.beta.array() * (1.0 - h.array().square())).matrix();
    grad.W.noalias() += dz * phi.transpose();
    grad.b += dz;

    if (label == kNil) continue;
    const Eigen::VectorXd entity = model.entities->Lookup(c.candidates[label]);
    if (model.use_user_entity) {
      grad.W_ue.noalias() += upstream_weight * user_vec * entity.transpose();
    }
    if (model.use_mention_entity) {
      grad.W_me.noalias() +=
          upstream_weight * MentionVector(c, *model.words) * entity.transpose();
    }
  }
  return grad;
}

namespace {

constexpr const char *kModelMagic = "sociolink-model";
constexpr int kModelVersion = 1;

EmbeddingTable MatrixToTable(const Eigen::MatrixXd &m) {
  EmbeddingTable table(EmbeddingKind::kWord, static_cast<int>(m.cols()));
  std::vector<double> row(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    table.Add(std::to_string(i), row);
  }
  return table;
}

Eigen::MatrixXd TableToMatrix(const EmbeddingTable &table) {
  Eigen::MatrixXd m(table.size(), table.dim());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.ids()[i] != std::to_string(i)) {
      throw DataError("parameter rows must be labelled 0..n-1");
    }
    m.row(static_cast<Eigen::Index>(i)) = table.Row(static_cast<int>(i));
  }
  return m;
}

void WriteBlock(std::ostream &out, const std::string &name, const char *kind,
                const EmbeddingTable &table) {
  out << '@' << name << ' ' << kind << '\n';
  WriteEmbeddings(table, out, 0);
}

std::string ReadBlockHeader(std::istream &in, const std::string &source,
                            const std::string &expected_name,
                            const std::string &expected_kind) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(source + ": missing block @" + expected_name);
  }
  std::istringstream fields(line);
  std::string name, kind;
  fields >> name >> kind;
  if (name != "@" + expected_name || kind != expected_kind) {
    throw DataError(source + ": expected block @" + expected_name + " " +
                    expected_kind + ", found '" + line + "'");
  }
  return name;
}

Eigen::MatrixXd ReadParam(std::istream &in, const std::string &source,
                          const std::string &name, Eigen::Index rows,
                          Eigen::Index cols) {
  ReadBlockHeader(in, source, name, "param");
  Eigen::MatrixXd m =
      TableToMatrix(ReadEmbeddings(in, EmbeddingKind::kWord, source + "@" + name));
  if (m.rows() != rows || m.cols() != cols) {
    throw DataError(source + ": block @" + name + " has shape " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ", expected " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  return m;
}

}  // namespace

void WriteModel(const Model &model, std::ostream &out) {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "features " << model.features->name() << '\n';
  out << "hidden " << model.hidden() << '\n';
  out << "feature_dim " << model.feature_dim() << '\n';
  out << "user_dim " << model.users->dim() << '\n';
  out << "word_dim " << model.words->dim() << '\n';
  out << "entity_dim " << model.entities->dim() << '\n';
  out << "use_user_entity " << (model.use_user_entity ? 1 : 0) << '\n';
  out << "use_mention_entity " << (model.use_mention_entity ? 1 : 0) << '\n';
  out << "end\n";
  WriteBlock(out, "mlp.W", "param", MatrixToTable(model.mlp.W));
  WriteBlock(out, "mlp.b", "param", MatrixToTable(model.mlp.b));
  WriteBlock(out, "mlp.beta", "param", MatrixToTable(model.mlp.beta));
  WriteBlock(out, "mlp.b_out", "param",
             MatrixToTable(Eigen::MatrixXd::Constant(1, 1, model.mlp.b_out)));
  WriteBlock(out, "comp.W_ue", "param", MatrixToTable(model.comp.W_ue));
  WriteBlock(out, "comp.W_me", "param", MatrixToTable(model.comp.W_me));
  WriteBlock(out, "embeddings.user", "table", *model.users);
  WriteBlock(out, "embeddings.word", "table", *model.words);
  WriteBlock(out, "embeddings.entity", "table", *model.entities);
}

void SaveModel(const Model &model, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model " + path);
  WriteModel(model, out);
}

Model ReadModel(std::istream &in, const std::string &source) {
  std::string line;
  if (!std::getline(in, line) ||
      line != std::string(kModelMagic) + " " + std::to_string(kModelVersion)) {
    throw DataError(source + ": not a model file");
  }
  std::map<std::string, std::string> header;
  while (true) {
    if (!std::getline(in, line)) throw DataError(source + ": truncated header");
    if (line == "end") break;
    std::istringstream fields(line);
    std::string key, value;
    if (!(fields >> key >> value)) {
      throw DataError(source + ": bad header line '" + line + "'");
    }
    header[key] = value;
  }
  auto get_int = [&](const std::string &key) {
    auto it = header.find(key);
    if (it == header.end()) throw DataError(source + ": header lacks " + key);
    return static_cast<Eigen::Index>(ParseInt(it->second));
  };
  if (header.count("features") == 0) {
    throw DataError(source + ": header lacks features");
  }

  Model model;
  try {
    model.features = MakeFeatureExtractor(header["features"]);
  } catch (const std::invalid_argument &e) {
    throw DataError(source + ": " + e.what());
  }
  const Eigen::Index m = get_int("hidden");
  const Eigen::Index d = get_int("feature_dim");
  const Eigen::Index du = get_int("user_dim");
  const Eigen::Index dw = get_int("word_dim");
  const Eigen::Index de = get_int("entity_dim");
  model.use_user_entity = get_int("use_user_entity") != 0;
  model.use_mention_entity = get_int("use_mention_entity") != 0;
  if (d != model.features->dim()) {
    throw DataError(source + ": feature_dim does not match feature set");
  }

  model.mlp.W = ReadParam(in, source, "mlp.W", m, d);
  model.mlp.b = ReadParam(in, source, "mlp.b", m, 1);
  model.mlp.beta = ReadParam(in, source, "mlp.beta", m, 1);
  model.mlp.b_out = ReadParam(in, source, "mlp.b_out", 1, 1)(0, 0);
  model.comp.W_ue = ReadParam(in, source, "comp.W_ue", du, de);
  model.comp.W_me = ReadParam(in, source, "comp.W_me", dw, de);

  auto read_table = [&](const std::string &name, EmbeddingKind kind,
                        Eigen::Index dim) {
    ReadBlockHeader(in, source, name, "table");
    auto table = std::make_shared<const EmbeddingTable>(
        ReadEmbeddings(in, kind, source + "@" + name));
    if (table->dim() != dim) {
      throw DataError(source + ": block @" + name + " dimension mismatch");
    }
    return table;
  };
  model.users = read_table("embeddings.user", EmbeddingKind::kUser, du);
  model.words = read_table("embeddings.word", EmbeddingKind::kWord, dw);
  model.entities = read_table("embeddings.entity", EmbeddingKind::kEntity, de);
  return model;
}

Model LoadModel(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model " + path);
  return ReadModel(in, path);
}

}  // namespace sociolink
