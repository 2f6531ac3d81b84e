#include "sociolink/corpus.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sociolink {

using json = nlohmann::json;

void ValidateTweet(const Tweet &tweet) {
  const int n = static_cast<int>(tweet.tokens.size());
  for (const Annotation &a : tweet.gold) {
    if (a.span.start < 0 || a.span.start >= a.span.end || a.span.end > n) {
      throw DataError("tweet " + tweet.id + ": gold span [" +
                      std::to_string(a.span.start) + "," +
                      std::to_string(a.span.end) + ") outside " +
                      std::to_string(n) + " tokens");
    }
    if (a.entity.empty()) {
      throw DataError("tweet " + tweet.id + ": gold annotation without entity");
    }
  }
  for (std::size_t i = 0; i < tweet.gold.size(); ++i) {
    for (std::size_t j = i + 1; j < tweet.gold.size(); ++j) {
      if (tweet.gold[i].span.Overlaps(tweet.gold[j].span)) {
        throw DataError("tweet " + tweet.id + ": overlapping gold spans");
      }
    }
  }
}

Lexicon::Lexicon(int max_ngram) : max_ngram_(max_ngram) {
  if (max_ngram < 1) throw std::invalid_argument("max_ngram must be >= 1");
}

void Lexicon::Add(const std::string &surface,
                  std::vector<LexiconEntry> entries) {
  if (surface.empty()) throw DataError("lexicon: empty surface form");
  if (entries.empty()) {
    throw DataError("lexicon: no candidates for '" + surface + "'");
  }
  if (entries_.count(surface) != 0) {
    throw DataError("lexicon: duplicate surface form '" + surface + "'");
  }
  std::set<EntityId> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const LexiconEntry &e = entries[i];
    if (!(e.prior >= 0.0 && e.prior <= 1.0)) {
      throw DataError("lexicon: prior out of [0,1] for '" + surface + "'");
    }
    if (i > 0 && e.prior > entries[i - 1].prior) {
      throw DataError("lexicon: priors not descending for '" + surface + "'");
    }
    if (!seen.insert(e.entity).second) {
      throw DataError("lexicon: entity " + e.entity + " repeated for '" +
                      surface + "'");
    }
  }
  entries_.emplace(surface, std::move(entries));
}

const std::vector<LexiconEntry> *Lexicon::Find(std::string_view surface) const {
  auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second;
}

int MentionCandidate::Find(const EntityId &entity) const {
  auto it = std::find(candidates.begin(), candidates.end(), entity);
  return it == candidates.end() ? kNil
                                : static_cast<int>(it - candidates.begin());
}

std::vector<MentionCandidate> GenerateCandidates(const Tweet &tweet,
                                                 const Lexicon &lexicon) {
  std::vector<MentionCandidate> out;
  const int n = static_cast<int>(tweet.tokens.size());
  // Iterating end-major then start-minor emits the (end, start) order
  // directly.
  for (int end = 1; end <= n; ++end) {
    for (int start = std::max(0, end - lexicon.max_ngram()); start < end;
         ++start) {
      std::string surface = JoinTokens(tweet.tokens, start, end);
      const auto *entries = lexicon.Find(surface);
      if (entries == nullptr) continue;
      MentionCandidate c;
      c.index = static_cast<int>(out.size());
      c.span = {start, end};
      c.surface = std::move(surface);
      for (const LexiconEntry &e : *entries) {
        c.candidates.push_back(e.entity);
        c.priors.push_back(e.prior);
      }
      c.words.assign(tweet.tokens.begin() + start, tweet.tokens.begin() + end);
      out.push_back(std::move(c));
    }
  }
  return out;
}

namespace {

Tweet TweetFromJson(const json &j) {
  if (!j.is_object()) throw DataError("record is not an object");
  Tweet t;
  t.id = j.at("id").get<std::string>();
  t.author = j.at("author").get<std::string>();
  for (const auto &tok : j.at("tokens")) t.tokens.push_back(tok.get<std::string>());
  if (j.contains("gold")) {
    for (const auto &g : j.at("gold")) {
      if (!g.is_array() || g.size() != 3) {
        throw DataError("gold item must be [start, end, entity_id]");
      }
      Annotation a;
      a.span.start = g[0].get<int>();
      a.span.end = g[1].get<int>();
      a.entity = g[2].get<std::string>();
      t.gold.push_back(std::move(a));
    }
  }
  return t;
}

}  // namespace

std::string FormatTweet(const Tweet &tweet) {
  json j;
  j["id"] = tweet.id;
  j["author"] = tweet.author;
  j["tokens"] = tweet.tokens;
  json gold = json::array();
  for (const Annotation &a : tweet.gold) {
    gold.push_back(json::array({a.span.start, a.span.end, a.entity}));
  }
  j["gold"] = std::move(gold);
  return j.dump();
}

std::vector<Tweet> ParseCorpus(std::string_view text,
                               const std::string &source) {
  std::vector<Tweet> tweets;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      Tweet t = TweetFromJson(json::parse(line));
      ValidateTweet(t);
      tweets.push_back(std::move(t));
    } catch (const json::exception &e) {
      throw ParseError(source, line_no, e.what());
    } catch (const DataError &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return tweets;
}

std::vector<Tweet> LoadCorpus(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseCorpus(buf.str(), path);
}

void SaveCorpus(const std::vector<Tweet> &tweets, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus " + path);
  for (const Tweet &t : tweets) out << FormatTweet(t) << '\n';
}

Lexicon LoadLexicon(const std::string &path, int max_ngram) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon " + path);
  Lexicon lexicon(max_ngram);
  std::string line;
  std::size_t line_no = 0;
  std::string current;
  std::vector<LexiconEntry> pending;
  std::size_t pending_line = 0;
  auto flush = [&] {
    if (pending.empty()) return;
    try {
      lexicon.Add(current, std::move(pending));
    } catch (const DataError &e) {
      throw ParseError(path, pending_line, e.what());
    }
    pending.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw ParseError(path, line_no, "expected 3 tab-separated columns");
    }
    std::string surface = line.substr(0, t1);
    LexiconEntry entry;
    entry.entity = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      entry.prior = ParseDouble(std::string_view(line).substr(t2 + 1));
    } catch (const DataError &e) {
      throw ParseError(path, line_no, e.what());
    }
    if (surface != current || pending.empty()) {
      flush();
      if (lexicon.Find(surface) != nullptr) {
        throw ParseError(path, line_no,
                         "rows for '" + surface + "' are not contiguous");
      }
      current = surface;
      pending_line = line_no;
    }
    pending.push_back(std::move(entry));
  }
  flush();
  return lexicon;
}

void SaveLexicon(const Lexicon &lexicon, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write lexicon " + path);
  for (const auto &[surface, entries] : lexicon.entries()) {
    for (const LexiconEntry &e : entries) {
      out << surface << '\t' << e.entity << '\t' << FormatDouble(e.prior)
          << '\n';
    }
  }
}

CorpusSplit SplitCorpus(const std::vector<Tweet> &tweets, double dev_fraction,
                        double test_fraction, std::uint64_t seed) {
  if (dev_fraction < 0 || test_fraction < 0 ||
      dev_fraction + test_fraction > 1.0) {
    throw std::invalid_argument("split fractions must be in [0,1] and sum <= 1");
  }
  std::vector<std::size_t> order(tweets.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n = tweets.size();
  const auto n_dev = static_cast<std::size_t>(dev_fraction * n);
  const auto n_test = static_cast<std::size_t>(test_fraction * n);
  CorpusSplit split;
  for (std::size_t i = 0; i < n; ++i) {
    const Tweet &t = tweets[order[i]];
    if (i < n_dev) {
      split.dev.push_back(t);
    } else if (i < n_dev + n_test) {
      split.test.push_back(t);
    } else {
      split.train.push_back(t);
    }
  }
  return split;
}

}  // namespace sociolink
