#include "sociolink/homophily.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace sociolink {

UserEntityProfile::UserEntityProfile(UserId u, std::vector<EntityId> e)
    : user(std::move(u)), entities(std::move(e)) {
  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
}

namespace {

template <typename T>
double SortedCosine(const std::vector<T> &a, const std::vector<T> &b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) /
         std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

struct RunningMean {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double StdError() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

}  // namespace

double EntitySimilarity(const UserEntityProfile &a,
                        const UserEntityProfile &b) {
  return SortedCosine(a.entities, b.entities);
}

double HomophilyReport::ratio() const {
  return sim_disconnected > 0.0 ? sim_connected / sim_disconnected
                                : std::numeric_limits<double>::infinity();
}

double HomophilyReport::se_difference() const {
  return std::sqrt(se_connected * se_connected +
                   se_disconnected * se_disconnected);
}

HomophilyReport ComputeHomophily(const SocialGraph &graph,
                                 const std::vector<UserEntityProfile> &profiles,
                                 const HomophilyOptions &options) {
  if (graph.num_edges() == 0) {
    throw DataError("homophily needs a graph with at least one edge");
  }
  HomophilyReport report;

  // Entities interned to ints so each pair costs one sorted merge.
  std::unordered_map<UserId, const UserEntityProfile *> by_user;
  for (const auto &p : profiles) by_user[p.user] = &p;
  std::unordered_map<EntityId, int> entity_ids;
  const std::size_t n = graph.num_nodes();
  std::vector<std::vector<int>> sets(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto it = by_user.find(graph.nodes()[v]);
    if (it == by_user.end()) {
      report.missing_profiles.push_back(graph.nodes()[v]);
      continue;
    }
    for (const EntityId &e : it->second->entities) {
      auto [pos, inserted] =
          entity_ids.emplace(e, static_cast<int>(entity_ids.size()));
      sets[v].push_back(pos->second);
    }
    std::sort(sets[v].begin(), sets[v].end());
    sets[v].erase(std::unique(sets[v].begin(), sets[v].end()), sets[v].end());
  }

  RunningMean connected;
  for (const auto &e : graph.edges()) {
    connected.Add(SortedCosine(sets[e.a], sets[e.b]));
  }

  RunningMean disconnected;
  const std::int64_t all_pairs =
      static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t non_adjacent =
      all_pairs - static_cast<std::int64_t>(graph.num_edges());
  if (non_adjacent > 0) {
    if (n <= options.exact_node_limit) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (graph.HasEdge(static_cast<int>(i), static_cast<int>(j))) continue;
          disconnected.Add(SortedCosine(sets[i], sets[j]));
        }
      }
    } else {
      report.exact = false;
      std::mt19937_64 rng(options.seed);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      while (disconnected.n < options.sample_pairs) {
        const std::size_t i = pick(rng);
        const std::size_t j = pick(rng);
        if (i == j || graph.HasEdge(static_cast<int>(i), static_cast<int>(j))) {
          continue;
        }
        disconnected.Add(SortedCosine(sets[i], sets[j]));
      }
    }
  }

  report.sim_connected = connected.mean;
  report.se_connected = connected.StdError();
  report.connected_pairs = connected.n;
  report.sim_disconnected = disconnected.mean;
  report.se_disconnected = disconnected.StdError();
  report.disconnected_pairs = disconnected.n;
  return report;
}

std::vector<UserEntityProfile> ProfilesFromCorpus(
    const std::vector<Tweet> &tweets) {
  std::vector<UserId> order;
  std::map<UserId, std::vector<EntityId>> entities;
  for (const Tweet &t : tweets) {
    auto [it, inserted] = entities.try_emplace(t.author);
    if (inserted) order.push_back(t.author);
    for (const Annotation &a : t.gold) it->second.push_back(a.entity);
  }
  std::vector<UserEntityProfile> profiles;
  profiles.reserve(order.size());
  for (const UserId &u : order) {
    profiles.emplace_back(u, std::move(entities[u]));
  }
  return profiles;
}

std::vector<UserEntityProfile> LoadProfiles(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open profiles " + path);
  std::vector<UserId> order;
  std::map<UserId, std::vector<EntityId>> entities;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string user, entity, extra;
    if (!(fields >> user)) continue;
    if (!(fields >> entity) || (fields >> extra)) {
      throw ParseError(path, line_no, "expected '<user_id> <entity_id>'");
    }
    auto [it, inserted] = entities.try_emplace(user);
    if (inserted) order.push_back(user);
    it->second.push_back(entity);
  }
  std::vector<UserEntityProfile> profiles;
  for (const UserId &u : order) {
    profiles.emplace_back(u, std::move(entities[u]));
  }
  return profiles;
}

void SaveProfiles(const std::vector<UserEntityProfile> &profiles,
                  const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write profiles " + path);
  for (const auto &p : profiles) {
    for (const EntityId &e : p.entities) out << p.user << '\t' << e << '\n';
  }
}

}  // namespace sociolink
