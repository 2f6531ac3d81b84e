#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sociolink/eval.h"
#include "sociolink/homophily.h"
#include "sociolink/linker.h"
#include "sociolink/netembed.h"
#include "sociolink/synthetic.h"
#include "sociolink/training.h"

namespace py = pybind11;
using namespace sociolink;

namespace {

using Table = std::shared_ptr<EmbeddingTable>;

EmbeddingKind KindFromString(const std::string &kind) {
  if (kind == "user") return EmbeddingKind::kUser;
  if (kind == "word") return EmbeddingKind::kWord;
  if (kind == "entity") return EmbeddingKind::kEntity;
  throw std::invalid_argument("kind must be user, word or entity: " + kind);
}

// (nil, [entity scores]) per candidate.
ScoreTable ToTable(const std::vector<std::pair<double, std::vector<double>>> &rows) {
  ScoreTable t;
  for (const auto &[nil, entities] : rows) t.push_back({nil, entities});
  return t;
}

std::vector<TokenSpan> ToSpans(const std::vector<std::pair<int, int>> &spans) {
  std::vector<TokenSpan> out;
  for (const auto &[s, e] : spans) out.push_back({s, e});
  return out;
}

py::tuple ToTuple(const Decoded &d) { return py::make_tuple(d.assignment.labels, d.score); }

KeyValues ToKeyValues(const py::dict &d) {
  KeyValues kv;
  for (const auto &[k, v] : d) kv[py::str(k)] = py::str(v);
  return kv;
}

py::dict CountsDict(const Counts &c) {
  const Prf p = ComputePrf(c);
  py::dict d;
  d["precision"] = p.precision;
  d["recall"] = p.recall;
  d["f1"] = p.f1;
  d["predicted"] = c.predicted;
  d["gold"] = c.gold;
  d["correct"] = c.correct;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Social-context entity linking";
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  m.attr("NIL") = kNil;

  py::class_<TokenSpan>(m, "Span")
      .def(py::init<>())
      .def(py::init([](int s, int e) { return TokenSpan{s, e}; }))
      .def_readwrite("start", &TokenSpan::start)
      .def_readwrite("end", &TokenSpan::end)
      .def("overlaps", &TokenSpan::Overlaps)
      .def("__eq__", [](const TokenSpan &a, const TokenSpan &b) { return a == b; })
      .def("__repr__", [](const TokenSpan &s) {
        return "Span(" + std::to_string(s.start) + ", " + std::to_string(s.end) + ")";
      });

  py::class_<Annotation>(m, "Annotation")
      .def(py::init([](int s, int e, EntityId entity) {
        return Annotation{{s, e}, std::move(entity)};
      }))
      .def_readwrite("span", &Annotation::span)
      .def_readwrite("entity", &Annotation::entity);

  py::class_<Tweet>(m, "Tweet")
      .def(py::init<>())
      .def(py::init([](std::string id, UserId author, std::vector<std::string> tokens,
                       std::vector<Annotation> gold) {
             Tweet t{std::move(id), std::move(author), std::move(tokens), std::move(gold)};
             ValidateTweet(t);
             return t;
           }),
           py::arg("id"), py::arg("author"), py::arg("tokens"),
           py::arg("gold") = std::vector<Annotation>{})
      .def_readwrite("id", &Tweet::id)
      .def_readwrite("author", &Tweet::author)
      .def_readwrite("tokens", &Tweet::tokens)
      .def_readwrite("gold", &Tweet::gold);

  m.def("load_corpus", &LoadCorpus, py::arg("path"));
  m.def("save_corpus", &SaveCorpus, py::arg("tweets"), py::arg("path"));
  m.def("split_corpus",
        [](const std::vector<Tweet> &tweets, double dev, double test, std::uint64_t seed) {
          CorpusSplit s = SplitCorpus(tweets, dev, test, seed);
          return py::make_tuple(s.train, s.dev, s.test);
        },
        py::arg("tweets"), py::arg("dev_fraction") = 0.2, py::arg("test_fraction") = 0.2,
        py::arg("seed") = 1);

  py::class_<Lexicon>(m, "Lexicon")
      .def(py::init<int>(), py::arg("max_ngram") = Lexicon::kDefaultMaxNgram)
      .def("add",
           [](Lexicon &lex, const std::string &surface,
              const std::vector<std::pair<EntityId, double>> &entries) {
             std::vector<LexiconEntry> e;
             for (const auto &[id, prior] : entries) e.push_back({id, prior});
             lex.Add(surface, std::move(e));
           })
      .def("find",
           [](const Lexicon &lex, const std::string &surface) -> py::object {
             const auto *e = lex.Find(surface);
             if (e == nullptr) return py::none();
             py::list out;
             for (const auto &x : *e) out.append(py::make_tuple(x.entity, x.prior));
             return out;
           })
      .def("__len__", &Lexicon::size);
  m.def("load_lexicon", [](const std::string &path) { return LoadLexicon(path); },
        py::arg("path"));
  m.def("save_lexicon", &SaveLexicon, py::arg("lexicon"), py::arg("path"));

  py::class_<MentionCandidate>(m, "MentionCandidate")
      .def_readonly("index", &MentionCandidate::index)
      .def_readonly("span", &MentionCandidate::span)
      .def_readonly("surface", &MentionCandidate::surface)
      .def_readonly("candidates", &MentionCandidate::candidates)
      .def_readonly("priors", &MentionCandidate::priors);
  m.def("candidates", &GenerateCandidates, py::arg("tweet"), py::arg("lexicon"));

  m.def("decode_table",
        [](const std::vector<std::pair<int, int>> &spans,
           const std::vector<std::pair<double, std::vector<double>>> &scores) {
          return ToTuple(DecodeTable(ToSpans(spans), ToTable(scores)));
        },
        py::arg("spans"), py::arg("scores"),
        "Best non-overlapping labeling. spans are (start, end) sorted by (end, start); "
        "scores are (nil, [entity scores]). Returns (labels, score), NIL = -1.");
  m.def("brute_force_table",
        [](const std::vector<std::pair<int, int>> &spans,
           const std::vector<std::pair<double, std::vector<double>>> &scores) {
          return ToTuple(BruteForceTable(ToSpans(spans), ToTable(scores)));
        },
        py::arg("spans"), py::arg("scores"));

  py::class_<EmbeddingTable, Table>(m, "EmbeddingTable")
      .def_property_readonly("dim", &EmbeddingTable::dim)
      .def_property_readonly("ids", &EmbeddingTable::ids)
      .def("__len__", &EmbeddingTable::size)
      .def("__contains__", [](const EmbeddingTable &t, const std::string &id) {
        return t.Contains(id);
      })
      .def("lookup", [](const EmbeddingTable &t, const std::string &id) { return t.Lookup(id); })
      .def("matrix", [](const EmbeddingTable &t) {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(t.size()), t.dim());
        for (int i = 0; i < static_cast<int>(t.size()); ++i) out.row(i) = t.Row(i).transpose();
        return out;
      });
  m.def("load_embeddings",
        [](const std::string &path, const std::string &kind) {
          return std::make_shared<EmbeddingTable>(LoadEmbeddings(path, KindFromString(kind)));
        },
        py::arg("path"), py::arg("kind"));
  m.def("save_embeddings",
        [](const EmbeddingTable &t, const std::string &path) { SaveEmbeddings(t, path, 0); },
        py::arg("table"), py::arg("path"));

  py::class_<SocialGraph>(m, "SocialGraph")
      .def(py::init<>())
      .def("add_edge", &SocialGraph::AddEdge, py::arg("u"), py::arg("v"),
           py::arg("weight") = 1.0)
      .def_property_readonly("nodes", &SocialGraph::nodes)
      .def_property_readonly("num_edges", &SocialGraph::num_edges)
      .def("__len__", &SocialGraph::num_nodes);
  m.def("load_graph", [](const std::string &path) { return LoadGraph(path); },
        py::arg("path"));

  m.def("train_line",
        [](const SocialGraph &g, int dim, int negatives, std::int64_t samples, double lr,
           std::uint64_t seed) {
          NetEmbedConfig c;
          c.dim = dim;
          c.negative_samples = negatives;
          c.total_samples = samples;
          c.initial_lr = lr;
          c.seed = seed;
          return std::make_shared<EmbeddingTable>(TrainLine2(g, c));
        },
        py::arg("graph"), py::arg("dim") = 100, py::arg("negatives") = 5,
        py::arg("samples") = 0, py::arg("lr") = 0.025, py::arg("seed") = 1);

  py::class_<SyntheticData>(m, "SyntheticData")
      .def_readonly("tweets", &SyntheticData::tweets)
      .def_readonly("lexicon", &SyntheticData::lexicon)
      .def_readonly("graph", &SyntheticData::graph)
      .def_property_readonly("words",
                             [](const SyntheticData &d) { return std::make_shared<EmbeddingTable>(d.words); })
      .def_property_readonly("entities",
                             [](const SyntheticData &d) { return std::make_shared<EmbeddingTable>(d.entities); })
      .def_readonly("user_community", &SyntheticData::user_community)
      .def_readonly("entity_community", &SyntheticData::entity_community);
  m.def("synthesize",
        [](std::uint64_t seed, int users, int entities, int communities, int tweets_per_user,
           double ambiguity, double affinity, int word_dim, int entity_dim) {
          SynthConfig c;
          c.users = users;
          c.entities = entities;
          c.communities = communities;
          c.tweets_per_user = tweets_per_user;
          c.ambiguity = ambiguity;
          c.community_affinity = affinity;
          c.word_dim = word_dim;
          c.entity_dim = entity_dim;
          return GenerateSynthetic(c, seed);
        },
        py::arg("seed") = 1, py::arg("users") = 60, py::arg("entities") = 40,
        py::arg("communities") = 2, py::arg("tweets_per_user") = 12,
        py::arg("ambiguity") = 0.5, py::arg("affinity") = 0.9, py::arg("word_dim") = 50,
        py::arg("entity_dim") = 50);

  py::class_<Model>(m, "Model")
      .def_property_readonly("hidden", &Model::hidden)
      .def_property_readonly("feature_dim", &Model::feature_dim)
      .def_readonly("use_user_entity", &Model::use_user_entity)
      .def_readonly("use_mention_entity", &Model::use_mention_entity)
      .def_property_readonly("W_ue", [](const Model &m) { return m.comp.W_ue; })
      .def_property_readonly("W_me", [](const Model &m) { return m.comp.W_me; })
      .def("score",
           [](const Model &m, const Tweet &t, const Lexicon &lex, const std::vector<int> &labels) {
             const auto cands = GenerateCandidates(t, lex);
             Assignment a;
             a.labels = labels;
             return ScoreMessage(m, t, cands, a, t.author);
           },
           py::arg("tweet"), py::arg("lexicon"), py::arg("labels"))
      .def("decode",
           [](const Model &m, const Tweet &t, const Lexicon &lex) {
             return ToTuple(Decode(m, t, GenerateCandidates(t, lex), t.author));
           },
           py::arg("tweet"), py::arg("lexicon"));
  m.def("init_model",
        [](const Table &users, const Table &words, const Table &entities, int hidden,
           bool use_user_entity, bool use_mention_entity, const std::string &features,
           std::uint64_t seed) {
          ModelOptions o;
          o.hidden = hidden;
          o.use_user_entity = use_user_entity;
          o.use_mention_entity = use_mention_entity;
          o.seed = seed;
          return InitModel(users, words, entities, MakeFeatureExtractor(features), o);
        },
        py::arg("users"), py::arg("words"), py::arg("entities"), py::arg("hidden") = 40,
        py::arg("use_user_entity") = true, py::arg("use_mention_entity") = true,
        py::arg("features") = "default", py::arg("seed") = 1);
  m.def("load_model", &LoadModel, py::arg("path"));
  m.def("save_model", &SaveModel, py::arg("model"), py::arg("path"));

  m.def("train",
        [](const Model &init, const std::vector<Tweet> &train, const std::vector<Tweet> &dev,
           const Lexicon &lexicon, const py::dict &config) {
          const TrainConfig c = ParseTrainConfig(ToKeyValues(config));
          TrainState s;
          {
            py::gil_scoped_release release;
            s = Train(init, train, dev, lexicon, c);
          }
          py::list log;
          for (const EpochLog &e : s.log) {
            py::dict d;
            d["epoch"] = e.epoch;
            d["mean_loss"] = e.mean_loss;
            if (e.evaluated) d["dev"] = CountsDict(e.dev_counts);
            log.append(d);
          }
          return py::make_tuple(s.model, log);
        },
        py::arg("model"), py::arg("train"), py::arg("dev"), py::arg("lexicon"),
        py::arg("config") = py::dict(),
        "Max-margin training. Returns (best model, per-epoch log).");

  py::class_<TweetLinks>(m, "TweetLinks")
      .def(py::init([](std::string id, const std::vector<std::tuple<int, int, EntityId>> &links) {
             TweetLinks t{std::move(id), {}};
             for (const auto &[s, e, ent] : links) t.links.push_back({{s, e}, ent});
             return t;
           }),
           py::arg("id"), py::arg("links"))
      .def_readonly("id", &TweetLinks::id)
      .def_property_readonly("links", [](const TweetLinks &t) {
        std::vector<std::tuple<int, int, EntityId>> out;
        for (const Link &l : t.links) out.emplace_back(l.span.start, l.span.end, l.entity);
        return out;
      });
  m.def("link",
        [](const Model &model, const std::vector<Tweet> &tweets, const Lexicon &lexicon,
           int threads) {
          py::gil_scoped_release release;
          return LinkCorpus(model, tweets, lexicon, threads);
        },
        py::arg("model"), py::arg("tweets"), py::arg("lexicon"), py::arg("threads") = 1);
  m.def("load_links", &LoadLinks, py::arg("path"));
  m.def("save_links", &SaveLinks, py::arg("links"), py::arg("path"));

  m.def("prf",
        [](std::int64_t predicted, std::int64_t gold, std::int64_t correct) {
          const Prf p = ComputePrf({predicted, gold, correct});
          return py::make_tuple(p.precision, p.recall, p.f1);
        },
        py::arg("predicted"), py::arg("gold"), py::arg("correct"));
  m.def("evaluate",
        [](const std::vector<Tweet> &gold, const std::vector<TweetLinks> &pred) {
          return CountsDict(Evaluate(gold, pred).total);
        },
        py::arg("gold"), py::arg("predicted"));
  m.def("bootstrap_compare",
        [](const std::vector<Tweet> &gold, const std::vector<TweetLinks> &a,
           const std::vector<TweetLinks> &b, int samples, std::uint64_t seed) {
          const BootstrapResult r =
              BootstrapCompare(Evaluate(gold, a), Evaluate(gold, b), samples, seed);
          return py::make_tuple(r.t_statistic, r.p_value);
        },
        py::arg("gold"), py::arg("a"), py::arg("b"), py::arg("samples") = 100,
        py::arg("seed") = 1, "Paired bootstrap t-test. Returns (t, p).");

  m.def("entity_similarity",
        [](const std::vector<EntityId> &a, const std::vector<EntityId> &b) {
          return EntitySimilarity(UserEntityProfile("a", a), UserEntityProfile("b", b));
        },
        py::arg("a"), py::arg("b"));
  m.def("homophily",
        [](const SocialGraph &g, const std::map<UserId, std::vector<EntityId>> &profiles,
           std::uint64_t seed) {
          std::vector<UserEntityProfile> p;
          for (const auto &[u, e] : profiles) p.emplace_back(u, e);
          HomophilyOptions o;
          o.seed = seed;
          const HomophilyReport r = ComputeHomophily(g, p, o);
          py::dict d;
          d["sim_connected"] = r.sim_connected;
          d["sim_disconnected"] = r.sim_disconnected;
          d["ratio"] = r.ratio();
          d["se_difference"] = r.se_difference();
          d["connected_pairs"] = r.connected_pairs;
          d["disconnected_pairs"] = r.disconnected_pairs;
          d["exact"] = r.exact;
          return d;
        },
        py::arg("graph"), py::arg("profiles"), py::arg("seed") = 1);
  m.def("profiles_from_corpus", [](const std::vector<Tweet> &tweets) {
    std::map<UserId, std::vector<EntityId>> out;
    for (const auto &p : ProfilesFromCorpus(tweets)) out[p.user] = p.entities;
    return out;
  });
}
