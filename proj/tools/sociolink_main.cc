// sociolink: command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.
// Diagnostics go to stderr; data goes to stdout or --out.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sociolink/config.h"
#include "sociolink/corpus.h"
#include "sociolink/embeddings.h"
#include "sociolink/eval.h"
#include "sociolink/graph.h"
#include "sociolink/homophily.h"
#include "sociolink/linker.h"
#include "sociolink/netembed.h"
#include "sociolink/scorer.h"
#include "sociolink/synthetic.h"
#include "sociolink/training.h"

namespace fs = std::filesystem;
using namespace sociolink;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

bool g_quiet = false;

struct SynthOptions {
  std::string out_dir;
  SynthConfig config;
  double dev_fraction = 0.2;
  double test_fraction = 0.2;
  std::uint64_t seed = 1;
};

struct EmbedOptions {
  std::string graph;
  std::string out;
  NetEmbedConfig config;
};

struct TrainOptions {
  std::string corpus, dev, lexicon, user_emb, word_emb, entity_emb, config, out,
      log;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct LinkOptions {
  std::string model, corpus, lexicon, out;
  int threads = 1;
};

struct EvalOptions {
  std::string gold, pred, out;
};

struct CompareOptions {
  std::string gold, pred_a, pred_b;
  int samples = 100;
  std::uint64_t seed = 1;
};

struct HomophilyOptionsCli {
  std::string graph, profiles;
  HomophilyOptions options;
};

std::ostream *OpenOut(const std::string &path, std::ofstream &file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  return &file;
}

int RunSynth(const SynthOptions &o) {
  SyntheticData data = GenerateSynthetic(o.config, o.seed);
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  CorpusSplit split =
      SplitCorpus(data.tweets, o.dev_fraction, o.test_fraction, o.seed);
  SaveCorpus(data.tweets, (dir / "corpus.jsonl").string());
  SaveCorpus(split.train, (dir / "train.jsonl").string());
  SaveCorpus(split.dev, (dir / "dev.jsonl").string());
  SaveCorpus(split.test, (dir / "test.jsonl").string());
  SaveLexicon(data.lexicon, (dir / "lexicon.tsv").string());
  SaveGraph(data.graph, (dir / "graph.txt").string());
  SaveEmbeddings(data.words, (dir / "words.emb").string());
  SaveEmbeddings(data.entities, (dir / "entities.emb").string());
  SaveProfiles(ProfilesFromCorpus(data.tweets), (dir / "profiles.tsv").string());
  std::cerr << "synth: " << data.tweets.size() << " tweets ("
            << split.train.size() << " train, " << split.dev.size() << " dev, "
            << split.test.size() << " test), " << data.lexicon.size()
            << " surface forms, " << data.graph.num_nodes() << " users, "
            << data.graph.num_edges() << " edges -> " << o.out_dir << '\n';
  return 0;
}

int RunEmbed(const EmbedOptions &o) {
  SocialGraph graph = LoadGraph(o.graph, &std::cerr);
  EmbeddingTable table = TrainLine2(graph, o.config);
  SaveEmbeddings(table, o.out);
  std::cerr << "embed-network: " << table.size() << " users, dim "
            << table.dim() << ", "
            << o.config.ResolvedSamples(graph.num_edges()) << " samples -> "
            << o.out << '\n';
  return 0;
}

int RunTrain(const TrainOptions &o) {
  KeyValues values;
  if (!o.config.empty()) values = LoadKeyValues(o.config);
  for (const std::string &kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw DataError("--set expects KEY=VALUE");
    values[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (o.seed != 0) values["seed"] = std::to_string(o.seed);
  if (o.threads != 0) values["threads"] = std::to_string(o.threads);

  // Model-shape keys share the config file with the training keys.
  ModelOptions model_options;
  std::string feature_set = DefaultFeatureExtractor::kName;
  auto take = [&values](const std::string &key, auto &&apply) {
    auto it = values.find(key);
    if (it == values.end()) return;
    apply(it->second);
    values.erase(it);
  };
  take("hidden", [&](const std::string &v) {
    model_options.hidden = static_cast<int>(ParseInt(v));
  });
  take("use_user_entity", [&](const std::string &v) {
    model_options.use_user_entity = ParseInt(v) != 0;
  });
  take("use_mention_entity", [&](const std::string &v) {
    model_options.use_mention_entity = ParseInt(v) != 0;
  });
  take("features", [&](const std::string &v) { feature_set = v; });
  take("init_seed", [&](const std::string &v) {
    model_options.seed = static_cast<std::uint64_t>(ParseInt(v));
  });
  const TrainConfig config = ParseTrainConfig(values);

  if (!g_quiet) {
    std::cerr << "# resolved training config\n";
    std::cerr << "hidden = " << model_options.hidden << '\n'
              << "use_user_entity = " << model_options.use_user_entity << '\n'
              << "use_mention_entity = " << model_options.use_mention_entity
              << '\n'
              << "features = " << feature_set << '\n'
              << "init_seed = " << model_options.seed << '\n';
    for (const auto &[k, v] : FormatTrainConfig(config)) {
      std::cerr << k << " = " << v << '\n';
    }
  }

  const std::vector<Tweet> train = LoadCorpus(o.corpus);
  const std::vector<Tweet> dev = LoadCorpus(o.dev);
  const Lexicon lexicon = LoadLexicon(o.lexicon);
  auto users = std::make_shared<const EmbeddingTable>(
      LoadEmbeddings(o.user_emb, EmbeddingKind::kUser));
  auto words = std::make_shared<const EmbeddingTable>(
      LoadEmbeddings(o.word_emb, EmbeddingKind::kWord));
  auto entities = std::make_shared<const EmbeddingTable>(
      LoadEmbeddings(o.entity_emb, EmbeddingKind::kEntity));
  std::shared_ptr<const FeatureExtractor> features;
  try {
    features = MakeFeatureExtractor(feature_set);
  } catch (const std::invalid_argument &e) {
    throw DataError(e.what());
  }
  Model initial = InitModel(users, words, entities, features, model_options);

  std::ofstream log_file;
  std::ostream *log = OpenOut(o.log, log_file);
  *log << "epoch\tmean_loss\tdev_precision\tdev_recall\tdev_f1\n";
  char buf[256];
  TrainState state = Train(initial, train, dev, lexicon, config,
                           [log, &buf](const EpochLog &e) {
                             if (e.evaluated) {
                               std::snprintf(buf, sizeof(buf),
                                             "%d\t%.6f\t%.6f\t%.6f\t%.6f\n",
                                             e.epoch, e.mean_loss,
                                             e.dev.precision, e.dev.recall,
                                             e.dev.f1);
                             } else {
                               std::snprintf(buf, sizeof(buf),
                                             "%d\t%.6f\t-\t-\t-\n", e.epoch,
                                             e.mean_loss);
                             }
                             *log << buf;
                           });
  log->flush();
  SaveModel(state.model, o.out);
  std::cerr << "train: " << state.epochs_run << " epochs, best dev F1 "
            << state.best_dev_f1 << " at epoch " << state.best_epoch << ", "
            << state.skipped_train
            << " training tweets skipped (gold outside lexicon) -> " << o.out
            << '\n';
  return 0;
}

int RunLink(const LinkOptions &o) {
  const Model model = LoadModel(o.model);
  const std::vector<Tweet> tweets = LoadCorpus(o.corpus);
  const Lexicon lexicon = LoadLexicon(o.lexicon);
  const std::vector<TweetLinks> links =
      LinkCorpus(model, tweets, lexicon, o.threads);
  std::ofstream file;
  std::ostream *out = OpenOut(o.out, file);
  for (const TweetLinks &l : links) *out << FormatLinks(l) << '\n';
  std::cerr << "link: " << links.size() << " tweets\n";
  return 0;
}

int RunEval(const EvalOptions &o) {
  const LinkingResult result = Evaluate(LoadCorpus(o.gold), LoadLinks(o.pred));
  if (!result.matching_discrepancies.empty()) {
    std::cerr << "eval: greedy and optimal matching differ on "
              << result.matching_discrepancies.size() << " tweets:";
    for (const auto &id : result.matching_discrepancies) std::cerr << ' ' << id;
    std::cerr << '\n';
  }
  const Prf prf = result.prf();
  std::ofstream file;
  std::ostream *out = OpenOut(o.out, file);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f\t%lld\t%lld\t%lld\n",
                prf.precision, prf.recall, prf.f1,
                static_cast<long long>(result.total.predicted),
                static_cast<long long>(result.total.gold),
                static_cast<long long>(result.total.correct));
  *out << "precision\trecall\tf1\tpredicted\tgold\tcorrect\n" << buf;
  return 0;
}

int RunCompare(const CompareOptions &o) {
  const std::vector<Tweet> gold = LoadCorpus(o.gold);
  const LinkingResult a = Evaluate(gold, LoadLinks(o.pred_a));
  const LinkingResult b = Evaluate(gold, LoadLinks(o.pred_b));
  const BootstrapResult r = BootstrapCompare(a, b, o.samples, o.seed);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6g\t%.6g\n", a.prf().f1,
                b.prf().f1, r.t_statistic, r.p_value);
  std::cout << "f1_a\tf1_b\tt\tp\n" << buf;
  return 0;
}

int RunHomophily(const HomophilyOptionsCli &o) {
  const SocialGraph graph = LoadGraph(o.graph, &std::cerr);
  const auto profiles = LoadProfiles(o.profiles);
  const HomophilyReport r = ComputeHomophily(graph, profiles, o.options);
  if (!r.missing_profiles.empty()) {
    std::cerr << "homophily: " << r.missing_profiles.size()
              << " graph users have no profile (scored as empty)\n";
  }
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.4f\t%lld\t%lld\t%s\n",
                r.sim_connected, r.sim_disconnected, r.ratio(),
                static_cast<long long>(r.connected_pairs),
                static_cast<long long>(r.disconnected_pairs),
                r.exact ? "exact" : "sampled");
  std::cout << "sim_connected\tsim_disconnected\tratio\tconnected_pairs\t"
               "disconnected_pairs\tmode\n"
            << buf;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Structured entity linking with social embeddings"};
  app.require_subcommand(1);
  app.add_flag("-q,--quiet", g_quiet, "Do not echo the resolved configuration");

  SynthOptions synth;
  auto *synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--users", synth.config.users, "Number of users")->capture_default_str();
  synth_cmd->add_option("--entities", synth.config.entities, "Number of entities")->capture_default_str();
  synth_cmd->add_option("--communities", synth.config.communities, "Number of communities")->capture_default_str();
  synth_cmd->add_option("--tweets-per-user", synth.config.tweets_per_user, "Tweets per user")->capture_default_str();
  synth_cmd->add_option("--ambiguity", synth.config.ambiguity, "Fraction of entities with shared names")->capture_default_str();
  synth_cmd->add_option("--affinity", synth.config.community_affinity, "P(mention from own community)")->capture_default_str();
  synth_cmd->add_option("--edge-in", synth.config.edge_prob_in, "Within-community edge probability")->capture_default_str();
  synth_cmd->add_option("--edge-out", synth.config.edge_prob_out, "Cross-community edge probability")->capture_default_str();
  synth_cmd->add_option("--word-dim", synth.config.word_dim, "Word embedding dimension")->capture_default_str();
  synth_cmd->add_option("--entity-dim", synth.config.entity_dim, "Entity embedding dimension")->capture_default_str();
  synth_cmd->add_option("--dev-fraction", synth.dev_fraction, "Dev split fraction")->capture_default_str();
  synth_cmd->add_option("--test-fraction", synth.test_fraction, "Test split fraction")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();

  EmbedOptions embed;
  auto *embed_cmd = app.add_subcommand("embed-network", "Train user embeddings from a social graph");
  embed_cmd->add_option("--graph", embed.graph, "Edge-list file")->required();
  embed_cmd->add_option("--out", embed.out, "Output embedding file")->required();
  embed_cmd->add_option("--dim", embed.config.dim, "Embedding dimension")->capture_default_str();
  embed_cmd->add_option("--negatives", embed.config.negative_samples, "Negative samples per edge")->capture_default_str();
  embed_cmd->add_option("--samples", embed.config.total_samples, "Total edge samples (0 = 1000 x edges)")->capture_default_str();
  embed_cmd->add_option("--lr", embed.config.initial_lr, "Initial learning rate")->capture_default_str();
  embed_cmd->add_option("--seed", embed.config.seed, "Random seed")->capture_default_str();
  embed_cmd->add_option("--threads", embed.config.threads, "Worker threads (>1 is not reproducible)")->capture_default_str();

  TrainOptions train;
  auto *train_cmd = app.add_subcommand("train", "Train a linking model");
  train_cmd->add_option("--corpus", train.corpus, "Training corpus")->required();
  train_cmd->add_option("--dev", train.dev, "Development corpus")->required();
  train_cmd->add_option("--lexicon", train.lexicon, "Lexicon TSV")->required();
  train_cmd->add_option("--user-emb", train.user_emb, "User embeddings")->required();
  train_cmd->add_option("--word-emb", train.word_emb, "Word embeddings")->required();
  train_cmd->add_option("--entity-emb", train.entity_emb, "Entity embeddings")->required();
  train_cmd->add_option("--config", train.config, "key=value training config");
  train_cmd->add_option("--set", train.overrides, "Override a config key (KEY=VALUE)");
  train_cmd->add_option("--out", train.out, "Output model file")->required();
  train_cmd->add_option("--log", train.log, "Training log TSV (default stdout)");
  train_cmd->add_option("--seed", train.seed, "Override config seed");
  train_cmd->add_option("--threads", train.threads, "Dev decoding threads");

  LinkOptions link;
  auto *link_cmd = app.add_subcommand("link", "Link a corpus with a trained model");
  link_cmd->add_option("--model", link.model, "Model file")->required();
  link_cmd->add_option("--corpus", link.corpus, "Corpus to link")->required();
  link_cmd->add_option("--lexicon", link.lexicon, "Lexicon TSV")->required();
  link_cmd->add_option("--out", link.out, "Output links (default stdout)");
  link_cmd->add_option("--threads", link.threads, "Decoding threads")->capture_default_str();

  EvalOptions eval;
  auto *eval_cmd = app.add_subcommand("eval", "Score linker output against gold");
  eval_cmd->add_option("--gold", eval.gold, "Gold corpus")->required();
  eval_cmd->add_option("--pred", eval.pred, "Linker output")->required();
  eval_cmd->add_option("--out", eval.out, "Output TSV (default stdout)");

  CompareOptions compare;
  auto *compare_cmd = app.add_subcommand("compare", "Bootstrap paired t-test between two systems");
  compare_cmd->add_option("--gold", compare.gold, "Gold corpus")->required();
  compare_cmd->add_option("--pred-a", compare.pred_a, "System A output")->required();
  compare_cmd->add_option("--pred-b", compare.pred_b, "System B output")->required();
  compare_cmd->add_option("--samples", compare.samples, "Bootstrap samples")->capture_default_str();
  compare_cmd->add_option("--seed", compare.seed, "Random seed")->capture_default_str();

  HomophilyOptionsCli homophily;
  auto *homophily_cmd = app.add_subcommand("homophily", "Entity-driven similarity of connected vs disconnected users");
  homophily_cmd->add_option("--graph", homophily.graph, "Edge-list file")->required();
  homophily_cmd->add_option("--profiles", homophily.profiles, "User-entity TSV")->required();
  homophily_cmd->add_option("--sample-pairs", homophily.options.sample_pairs, "Pairs sampled on large graphs")->capture_default_str();
  homophily_cmd->add_option("--exact-limit", homophily.options.exact_node_limit, "Largest graph enumerated exactly")->capture_default_str();
  homophily_cmd->add_option("--seed", homophily.options.seed, "Sampling seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App *cmd = app.get_subcommands().front();
  if (!g_quiet) {
    std::cerr << "# sociolink " << cmd->get_name() << '\n'
              << cmd->config_to_str(true, false);
  }
  try {
    if (cmd == synth_cmd) return RunSynth(synth);
    if (cmd == embed_cmd) return RunEmbed(embed);
    if (cmd == train_cmd) return RunTrain(train);
    if (cmd == link_cmd) return RunLink(link);
    if (cmd == eval_cmd) return RunEval(eval);
    if (cmd == compare_cmd) return RunCompare(compare);
    if (cmd == homophily_cmd) return RunHomophily(homophily);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
