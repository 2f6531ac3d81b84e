#ifndef SOCIOLINK_EMBEDDINGS_H_
#define SOCIOLINK_EMBEDDINGS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "sociolink/common.h"
#include "sociolink/corpus.h"

namespace sociolink {

enum class EmbeddingKind { kUser, kWord, kEntity };

std::string_view KindName(EmbeddingKind kind);

// Dense id -> vector table. Rows are stored contiguously in insertion order.
class EmbeddingTable {
 public:
  using RowMap = Eigen::Map<const Eigen::VectorXd>;

  EmbeddingTable(EmbeddingKind kind, int dim);

  // Throws DataError on a duplicate id, wrong length or non-finite value.
  void Add(const std::string &id, std::span<const double> row);

  EmbeddingKind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string> &ids() const { return ids_; }

  // Row index for id, or -1.
  int IndexOf(std::string_view id) const;
  bool Contains(std::string_view id) const { return IndexOf(id) >= 0; }

  RowMap Row(int index) const;

  // Stored row for known ids; the zero vector for unknown ids.
  Eigen::VectorXd Lookup(std::string_view id) const;

  bool operator==(const EmbeddingTable &other) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  EmbeddingKind kind_;
  int dim_;
  std::vector<std::string> ids_;
  std::vector<double> data_;
  std::unordered_map<std::string, int, Hash, std::equal_to<>> index_;
};

// Text format: "<count> <dim>" header, then "<id> <f1> ... <fdim>" per line.
EmbeddingTable LoadEmbeddings(const std::string &path, EmbeddingKind kind);
EmbeddingTable ReadEmbeddings(std::istream &in, EmbeddingKind kind,
                              const std::string &source);
void SaveEmbeddings(const EmbeddingTable &table, const std::string &path,
                    int significant_digits = 9);
// significant_digits <= 0 writes the shortest exact representation.
void WriteEmbeddings(const EmbeddingTable &table, std::ostream &out,
                     int significant_digits = 9);

// Average of the word vectors of the mention. Out-of-vocabulary words add a
// zero vector but still count in the denominator.
Eigen::VectorXd MentionVector(const MentionCandidate &candidate,
                              const EmbeddingTable &words);

}  // namespace sociolink

#endif  // SOCIOLINK_EMBEDDINGS_H_
