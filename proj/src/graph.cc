#include "sociolink/graph.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

namespace sociolink {

int SocialGraph::AddNode(const UserId &user) {
  auto [it, inserted] = index_.emplace(user, static_cast<int>(nodes_.size()));
  if (inserted) {
    nodes_.push_back(user);
    adjacency_.emplace_back();
  }
  return it->second;
}

bool SocialGraph::AddEdge(const UserId &u, const UserId &v, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw DataError("edge weight must be positive and finite");
  }
  int a = AddNode(u);
  int b = AddNode(v);
  if (a == b) return false;
  if (a > b) std::swap(a, b);
  auto [it, inserted] =
      edge_index_.emplace(Key(a, b), static_cast<int>(edges_.size()));
  if (inserted) {
    edges_.push_back({a, b, weight});
    adjacency_[a].push_back({b, weight});
    adjacency_[b].push_back({a, weight});
  } else {
    edges_[it->second].weight += weight;
    for (Neighbor &n : adjacency_[a]) {
      if (n.node == b) n.weight += weight;
    }
    for (Neighbor &n : adjacency_[b]) {
      if (n.node == a) n.weight += weight;
    }
  }
  return true;
}

int SocialGraph::IndexOf(const UserId &user) const {
  auto it = index_.find(user);
  return it == index_.end() ? -1 : it->second;
}

bool SocialGraph::HasEdge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return edge_index_.count(Key(a, b)) != 0;
}

double SocialGraph::WeightedDegree(int node) const {
  double d = 0.0;
  for (const Neighbor &n : adjacency_[node]) d += n.weight;
  return d;
}

SocialGraph LoadGraph(const std::string &path, std::ostream *warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open graph " + path);
  SocialGraph graph;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b, w, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) throw ParseError(path, line_no, "expected two users");
    double weight = 1.0;
    if (fields >> w) {
      try {
        weight = ParseDouble(w);
      } catch (const DataError &e) {
        throw ParseError(path, line_no, e.what());
      }
    }
    if (fields >> extra) throw ParseError(path, line_no, "too many fields");
    try {
      if (!graph.AddEdge(a, b, weight) && warnings != nullptr) {
        *warnings << path << ":" << line_no << ": skipping self-loop on " << a
                  << '\n';
      }
    } catch (const DataError &e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return graph;
}

void SaveGraph(const SocialGraph &graph, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write graph " + path);
  for (const SocialGraph::Edge &e : graph.edges()) {
    out << graph.nodes()[e.a] << ' ' << graph.nodes()[e.b] << ' '
        << FormatDouble(e.weight) << '\n';
  }
}

}  // namespace sociolink
