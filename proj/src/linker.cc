#include "sociolink/linker.h"

#include <algorithm>
#include <thread>

#include "sociolink/inference.h"

namespace sociolink {

TweetLinks LinkTweet(const Model &model, const Tweet &tweet,
                     const Lexicon &lexicon) {
  const std::vector<MentionCandidate> candidates =
      GenerateCandidates(tweet, lexicon);
  const Decoded decoded = Decode(model, tweet, candidates, tweet.author);
  TweetLinks out;
  out.id = tweet.id;
  for (std::size_t t = 0; t < candidates.size(); ++t) {
    const int label = decoded.assignment.labels[t];
    if (label == kNil) continue;
    out.links.push_back({candidates[t].span, candidates[t].candidates[label]});
  }
  std::sort(out.links.begin(), out.links.end(),
            [](const Link &a, const Link &b) { return a.span < b.span; });
  return out;
}

std::vector<TweetLinks> LinkCorpus(const Model &model,
                                   const std::vector<Tweet> &tweets,
                                   const Lexicon &lexicon, int threads) {
  std::vector<TweetLinks> out(tweets.size());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(tweets.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < tweets.size(); ++i) {
      out[i] = LinkTweet(model, tweets[i], lexicon);
    }
    return out;
  }
  std::vector<std::thread> workers;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < tweets.size(); i += threads) {
        out[i] = LinkTweet(model, tweets[i], lexicon);
      }
    });
  }
  for (auto &t : workers) t.join();
  return out;
}

}  // namespace sociolink
