#ifndef SOCIOLINK_LINKER_H_
#define SOCIOLINK_LINKER_H_

#include <vector>

#include "sociolink/corpus.h"
#include "sociolink/eval.h"
#include "sociolink/scorer.h"

namespace sociolink {

// Candidate generation + decoding for one message; the author is the user.
TweetLinks LinkTweet(const Model &model, const Tweet &tweet,
                     const Lexicon &lexicon);

// Decodes every tweet. threads > 1 fans out over a read-only model; the
// output order and content do not depend on the thread count.
std::vector<TweetLinks> LinkCorpus(const Model &model,
                                   const std::vector<Tweet> &tweets,
                                   const Lexicon &lexicon, int threads = 1);

}  // namespace sociolink

#endif  // SOCIOLINK_LINKER_H_
