#ifndef SOCIOLINK_CORPUS_H_
#define SOCIOLINK_CORPUS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sociolink/common.h"

namespace sociolink {

struct Annotation {
  TokenSpan span;
  EntityId entity;

  bool operator==(const Annotation &) const = default;
};

struct Tweet {
  std::string id;
  UserId author;
  std::vector<std::string> tokens;
  std::vector<Annotation> gold;

  bool operator==(const Tweet &) const = default;
};

// Throws DataError if a gold span is empty, out of range, overlaps another
// gold span, or names no entity.
void ValidateTweet(const Tweet &tweet);

struct LexiconEntry {
  EntityId entity;
  double prior = 0.0;

  bool operator==(const LexiconEntry &) const = default;
};

// Surface form -> ordered entity candidates. Surface forms are space-joined
// lowercased token n-grams; candidate lists are kept in descending prior
// order.
class Lexicon {
 public:
  static constexpr int kDefaultMaxNgram = 5;

  explicit Lexicon(int max_ngram = kDefaultMaxNgram);

  // Registers the complete candidate list for a surface form. Throws
  // DataError if the list is empty, a prior is outside [0,1], priors are not
  // descending, an entity repeats, or the surface is already present.
  void Add(const std::string &surface, std::vector<LexiconEntry> entries);

  // nullptr when the surface is not a key.
  const std::vector<LexiconEntry> *Find(std::string_view surface) const;

  int max_ngram() const { return max_ngram_; }
  std::size_t size() const { return entries_.size(); }

  const std::map<std::string, std::vector<LexiconEntry>, std::less<>> &
  entries() const {
    return entries_;
  }

 private:
  int max_ngram_;
  std::map<std::string, std::vector<LexiconEntry>, std::less<>> entries_;
};

// One lexicon match inside a message: the t-th decision unit.
struct MentionCandidate {
  int index = 0;
  TokenSpan span;
  std::string surface;
  std::vector<EntityId> candidates;  // lexicon order; Nil is implicit
  std::vector<double> priors;        // parallel to candidates
  std::vector<std::string> words;

  // Position of `entity` in candidates, or kNil when absent.
  int Find(const EntityId &entity) const;
};

// Every n-gram (1 <= n <= max_ngram) whose surface form is a lexicon key,
// ordered by (end, start) ascending, with index assigned in that order.
std::vector<MentionCandidate> GenerateCandidates(const Tweet &tweet,
                                                 const Lexicon &lexicon);

// Corpus files hold one JSON object per line:
//   {"id": "...", "author": "...", "tokens": [...], "gold": [[s, e, "E"], ...]}
// Blank lines are skipped. Every record is validated.
std::vector<Tweet> LoadCorpus(const std::string &path);
std::vector<Tweet> ParseCorpus(std::string_view text,
                               const std::string &source = "<corpus>");
void SaveCorpus(const std::vector<Tweet> &tweets, const std::string &path);
std::string FormatTweet(const Tweet &tweet);

// Lexicon files are TSV: surface, entity_id, prior. Rows for one surface are
// contiguous and in descending prior order.
Lexicon LoadLexicon(const std::string &path,
                    int max_ngram = Lexicon::kDefaultMaxNgram);
void SaveLexicon(const Lexicon &lexicon, const std::string &path);

struct CorpusSplit {
  std::vector<Tweet> train;
  std::vector<Tweet> dev;
  std::vector<Tweet> test;
};

// Seeded random split by tweet. Fractions must sum to at most 1.
CorpusSplit SplitCorpus(const std::vector<Tweet> &tweets, double dev_fraction,
                        double test_fraction, std::uint64_t seed);

}  // namespace sociolink

#endif  // SOCIOLINK_CORPUS_H_
