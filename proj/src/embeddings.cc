#include "sociolink/embeddings.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sociolink {

std::string_view KindName(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kUser:
      return "user";
    case EmbeddingKind::kWord:
      return "word";
    case EmbeddingKind::kEntity:
      return "entity";
  }
  return "unknown";
}

EmbeddingTable::EmbeddingTable(EmbeddingKind kind, int dim)
    : kind_(kind), dim_(dim) {
  if (dim <= 0) throw DataError("embedding dimension must be positive");
}

void EmbeddingTable::Add(const std::string &id, std::span<const double> row) {
  if (static_cast<int>(row.size()) != dim_) {
    throw DataError("embedding row for '" + id + "' has " +
                    std::to_string(row.size()) + " values, expected " +
                    std::to_string(dim_));
  }
  for (double v : row) {
    if (!std::isfinite(v)) {
      throw DataError("embedding row for '" + id + "' is not finite");
    }
  }
  if (!index_.emplace(id, static_cast<int>(ids_.size())).second) {
    throw DataError("duplicate embedding id '" + id + "'");
  }
  ids_.push_back(id);
  data_.insert(data_.end(), row.begin(), row.end());
}

int EmbeddingTable::IndexOf(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

EmbeddingTable::RowMap EmbeddingTable::Row(int index) const {
  return RowMap(data_.data() + static_cast<std::size_t>(index) * dim_, dim_);
}

Eigen::VectorXd EmbeddingTable::Lookup(std::string_view id) const {
  const int index = IndexOf(id);
  if (index < 0) return Eigen::VectorXd::Zero(dim_);
  return Row(index);
}

bool EmbeddingTable::operator==(const EmbeddingTable &other) const {
  return kind_ == other.kind_ && dim_ == other.dim_ && ids_ == other.ids_ &&
         data_ == other.data_;
}

EmbeddingTable ReadEmbeddings(std::istream &in, EmbeddingKind kind,
                              const std::string &source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  long long count = 0;
  long long dim = 0;
  {
    std::istringstream header(line);
    std::string a, b, extra;
    if (!(header >> a >> b) || (header >> extra)) {
      throw ParseError(source, 1, "header must be '<count> <dim>'");
    }
    try {
      count = ParseInt(a);
      dim = ParseInt(b);
    } catch (const DataError &e) {
      throw ParseError(source, 1, e.what());
    }
    if (count < 0 || dim <= 0) {
      throw ParseError(source, 1, "invalid count or dimension");
    }
  }
  EmbeddingTable table(kind, static_cast<int>(dim));
  std::vector<double> row(static_cast<std::size_t>(dim));
  for (long long r = 0; r < count; ++r) {
    ++line_no;
    if (!std::getline(in, line)) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(count) + " rows");
    }
    std::istringstream fields(line);
    std::string id;
    fields >> id;
    if (id.empty()) throw ParseError(source, line_no, "missing id");
    std::string token;
    std::size_t n = 0;
    try {
      while (fields >> token) {
        if (n == row.size()) {
          throw DataError("row has more than " + std::to_string(dim) +
                          " values");
        }
        row[n++] = ParseDouble(token);
      }
      if (n != row.size()) {
        throw DataError("row has " + std::to_string(n) + " values, expected " +
                        std::to_string(dim));
      }
      table.Add(id, row);
    } catch (const DataError &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return table;
}

EmbeddingTable LoadEmbeddings(const std::string &path, EmbeddingKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings " + path);
  EmbeddingTable table = ReadEmbeddings(in, kind, path);
  std::string rest;
  while (std::getline(in, rest)) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) {
      throw DataError(path + ": more rows than the header count");
    }
  }
  return table;
}

void WriteEmbeddings(const EmbeddingTable &table, std::ostream &out,
                     int significant_digits) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.size(); ++r) {
    out << table.ids()[r];
    auto row = table.Row(static_cast<int>(r));
    for (int k = 0; k < table.dim(); ++k) {
      if (significant_digits > 0) {
        std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, row[k]);
        out << ' ' << buf;
      } else {
        out << ' ' << FormatDouble(row[k]);
      }
    }
    out << '\n';
  }
}

void SaveEmbeddings(const EmbeddingTable &table, const std::string &path,
                    int significant_digits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embeddings " + path);
  WriteEmbeddings(table, out, significant_digits);
}

Eigen::VectorXd MentionVector(const MentionCandidate &candidate,
                              const EmbeddingTable &words) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(words.dim());
  if (candidate.words.empty()) return sum;
  for (const std::string &w : candidate.words) {
    const int index = words.IndexOf(w);
    if (index >= 0) sum += words.Row(index);
  }
  return sum / static_cast<double>(candidate.words.size());
}

}  // namespace sociolink
