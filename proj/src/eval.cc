#include "sociolink/eval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"

namespace sociolink {

namespace {

std::vector<std::size_t> StartOrder(const std::vector<Link> &links) {
  std::vector<std::size_t> order(links.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return links[x].span < links[y].span;
  });
  return order;
}

bool Matches(const Link &p, const Link &g) {
  return p.entity == g.entity && p.span.Overlaps(g.span);
}

// Kuhn's augmenting-path step.
bool Augment(std::size_t p, const std::vector<std::vector<std::size_t>> &adj,
             std::vector<int> &gold_owner, std::vector<bool> &seen) {
  for (std::size_t g : adj[p]) {
    if (seen[g]) continue;
    seen[g] = true;
    if (gold_owner[g] < 0 ||
        Augment(static_cast<std::size_t>(gold_owner[g]), adj, gold_owner,
                seen)) {
      gold_owner[g] = static_cast<int>(p);
      return true;
    }
  }
  return false;
}

}  // namespace

Counts MatchAndCount(const std::vector<Link> &predicted,
                     const std::vector<Link> &gold) {
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = i + 1; j < predicted.size(); ++j) {
      if (predicted[i].span.Overlaps(predicted[j].span)) {
        throw DataError("overlapping predicted links");
      }
    }
  }
  Counts c;
  c.predicted = static_cast<std::int64_t>(predicted.size());
  c.gold = static_cast<std::int64_t>(gold.size());
  const std::vector<std::size_t> gold_order = StartOrder(gold);
  std::vector<bool> used(gold.size(), false);
  for (std::size_t p : StartOrder(predicted)) {
    for (std::size_t g : gold_order) {
      if (!used[g] && Matches(predicted[p], gold[g])) {
        used[g] = true;
        ++c.correct;
        break;
      }
    }
  }
  return c;
}

Counts MatchAndCountOptimal(const std::vector<Link> &predicted,
                            const std::vector<Link> &gold) {
  Counts c;
  c.predicted = static_cast<std::int64_t>(predicted.size());
  c.gold = static_cast<std::int64_t>(gold.size());
  std::vector<std::vector<std::size_t>> adj(predicted.size());
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (Matches(predicted[p], gold[g])) adj[p].push_back(g);
    }
  }
  std::vector<int> gold_owner(gold.size(), -1);
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    std::vector<bool> seen(gold.size(), false);
    if (Augment(p, adj, gold_owner, seen)) ++c.correct;
  }
  return c;
}

Prf ComputePrf(const Counts &counts) {
  Prf r;
  if (counts.predicted > 0) {
    r.precision = static_cast<double>(counts.correct) /
                  static_cast<double>(counts.predicted);
  }
  if (counts.gold > 0) {
    r.recall =
        static_cast<double>(counts.correct) / static_cast<double>(counts.gold);
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

std::vector<Link> GoldLinks(const Tweet &tweet) {
  std::vector<Link> links;
  links.reserve(tweet.gold.size());
  for (const Annotation &a : tweet.gold) links.push_back({a.span, a.entity});
  return links;
}

LinkingResult Evaluate(const std::vector<Tweet> &gold,
                       const std::vector<TweetLinks> &predicted) {
  std::unordered_map<std::string, const TweetLinks *> by_id;
  std::unordered_set<std::string> gold_ids;
  for (const Tweet &t : gold) gold_ids.insert(t.id);
  for (const TweetLinks &p : predicted) {
    if (gold_ids.count(p.id) == 0) {
      throw DataError("prediction for unknown tweet " + p.id);
    }
    if (!by_id.emplace(p.id, &p).second) {
      throw DataError("duplicate prediction record for tweet " + p.id);
    }
  }
  LinkingResult result;
  static const std::vector<Link> kEmpty;
  for (const Tweet &t : gold) {
    auto it = by_id.find(t.id);
    const std::vector<Link> &pred = it == by_id.end() ? kEmpty : it->second->links;
    const std::vector<Link> gold_links = GoldLinks(t);
    Counts c = MatchAndCount(pred, gold_links);
    if (MatchAndCountOptimal(pred, gold_links).correct != c.correct) {
      result.matching_discrepancies.push_back(t.id);
    }
    result.ids.push_back(t.id);
    result.per_tweet.push_back(c);
    result.total += c;
  }
  return result;
}

BootstrapResult BootstrapCompare(const LinkingResult &a, const LinkingResult &b,
                                 int n_samples, std::uint64_t seed) {
  if (a.ids != b.ids) {
    throw DataError("bootstrap comparison needs identical tweet sets");
  }
  if (n_samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (a.ids.empty()) throw DataError("bootstrap comparison on empty tweet set");

  BootstrapResult result;
  const std::size_t n = a.ids.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> diffs;
  diffs.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    Counts ca, cb;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = pick(rng);
      ca += a.per_tweet[k];
      cb += b.per_tweet[k];
    }
    const double fa = ComputePrf(ca).f1;
    const double fb = ComputePrf(cb).f1;
    result.f1_pairs.emplace_back(fa, fb);
    diffs.push_back(fa - fb);
  }

  const double m = static_cast<double>(n_samples);
  const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / m;
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / (m - 1.0));

  if (sd == 0.0) {
    if (mean == 0.0) {
      result.t_statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.t_statistic = std::copysign(
          std::numeric_limits<double>::infinity(), mean);
      result.p_value = 0.0;
    }
    return result;
  }
  result.t_statistic = mean / (sd / std::sqrt(m));
  boost::math::students_t_distribution<double> dist(m - 1.0);
  result.p_value =
      2.0 * boost::math::cdf(boost::math::complement(
                dist, std::abs(result.t_statistic)));
  return result;
}

std::string FormatLinks(const TweetLinks &links) {
  nlohmann::json j;
  j["id"] = links.id;
  nlohmann::json arr = nlohmann::json::array();
  for (const Link &l : links.links) {
    arr.push_back(nlohmann::json::array({l.span.start, l.span.end, l.entity}));
  }
  j["links"] = std::move(arr);
  return j.dump();
}

void SaveLinks(const std::vector<TweetLinks> &links, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write links " + path);
  for (const TweetLinks &l : links) out << FormatLinks(l) << '\n';
}

std::vector<TweetLinks> LoadLinks(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open links " + path);
  std::vector<TweetLinks> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TweetLinks tl;
      tl.id = j.at("id").get<std::string>();
      for (const auto &l : j.at("links")) {
        if (!l.is_array() || l.size() != 3) {
          throw DataError("link must be [start, end, entity_id]");
        }
        tl.links.push_back(
            {{l[0].get<int>(), l[1].get<int>()}, l[2].get<std::string>()});
      }
      out.push_back(std::move(tl));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(path, line_no, e.what());
    } catch (const DataError &e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return out;
}

}  // namespace sociolink
