#ifndef SOCIOLINK_GRAPH_H_
#define SOCIOLINK_GRAPH_H_

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "sociolink/common.h"

namespace sociolink {

// Undirected weighted user graph. Each edge is stored once with a < b and
// appears in the adjacency lists of both endpoints.
class SocialGraph {
 public:
  struct Edge {
    int a = 0;
    int b = 0;
    double weight = 0.0;
  };
  struct Neighbor {
    int node = 0;
    double weight = 0.0;
  };

  // Returns the node index, adding the node if needed.
  int AddNode(const UserId &user);

  // Adds weight to the undirected edge {u, v}. Returns false (and adds
  // nothing but the nodes) for self-loops. Throws DataError if weight <= 0.
  bool AddEdge(const UserId &u, const UserId &v, double weight = 1.0);

  int IndexOf(const UserId &user) const;
  bool HasEdge(int a, int b) const;

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<UserId> &nodes() const { return nodes_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const std::vector<Neighbor> &neighbors(int node) const {
    return adjacency_[node];
  }
  double WeightedDegree(int node) const;

 private:
  static long long Key(int a, int b) {
    return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
  }

  std::vector<UserId> nodes_;
  std::unordered_map<UserId, int> index_;
  std::vector<Edge> edges_;
  std::unordered_map<long long, int> edge_index_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// Edge list: "<user_a> <user_b> [weight]" per line, weight defaults to 1.
// Self-loops are skipped with a warning to `warnings` (if non-null).
SocialGraph LoadGraph(const std::string &path, std::ostream *warnings = nullptr);
void SaveGraph(const SocialGraph &graph, const std::string &path);

}  // namespace sociolink

#endif  // SOCIOLINK_GRAPH_H_
