#include "sociolink/netembed.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace sociolink {

AliasSampler::AliasSampler(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs weights");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw std::invalid_argument("alias table weights sum to zero");
  }
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("negative weight");
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::size_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::size_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::size_t AliasSampler::Sample(double u1, double u2) const {
  std::size_t k = static_cast<std::size_t>(u1 * static_cast<double>(size()));
  if (k >= size()) k = size() - 1;
  return u2 < prob_[k] ? k : alias_[k];
}

double AliasSampler::Probability(std::size_t i) const {
  double mass = prob_[i];
  for (std::size_t k = 0; k < size(); ++k) {
    if (k != i && alias_[k] == i) mass += 1.0 - prob_[k];
  }
  return mass / static_cast<double>(size());
}

std::int64_t NetEmbedConfig::ResolvedSamples(std::size_t num_edges) const {
  if (total_samples > 0) return total_samples;
  const std::int64_t n = 1000 * static_cast<std::int64_t>(num_edges);
  return std::min(n, kMaxDefaultSamples);
}

namespace {

constexpr double kSigmoidBound = 6.0;

// Logit clamped to [-6, 6].
double Sigmoid(double x) {
  x = std::clamp(x, -kSigmoidBound, kSigmoidBound);
  return 1.0 / (1.0 + std::exp(-x));
}

struct Line2Trainer {
  const SocialGraph &graph;
  const NetEmbedConfig &config;
  AliasSampler edge_sampler;
  AliasSampler noise_sampler;
  std::vector<double> vertex;
  std::vector<double> context;
  std::int64_t total = 0;

  Line2Trainer(const SocialGraph &g, const NetEmbedConfig &c)
      : graph(g), config(c) {
    std::vector<double> edge_weights;
    edge_weights.reserve(graph.num_edges());
    for (const auto &e : graph.edges()) edge_weights.push_back(e.weight);
    edge_sampler = AliasSampler(edge_weights);

    std::vector<double> noise(graph.num_nodes());
    for (std::size_t v = 0; v < noise.size(); ++v) {
      noise[v] = std::pow(graph.WeightedDegree(static_cast<int>(v)), 0.75);
    }
    noise_sampler = AliasSampler(noise);

    const std::size_t cells = graph.num_nodes() * config.dim;
    vertex.resize(cells);
    context.assign(cells, 0.0);
    std::mt19937_64 init_rng(config.seed);
    std::uniform_real_distribution<double> init(-0.5 / config.dim,
                                                0.5 / config.dim);
    for (double &x : vertex) x = init(init_rng);
    total = config.ResolvedSamples(graph.num_edges());
  }

  // Runs `count` updates. Update i sits at global position offset + i * stride,
  // which drives the learning-rate schedule.
  void Run(std::int64_t offset, std::int64_t stride, std::int64_t count,
           std::uint64_t seed) {
    const int dim = config.dim;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<double> error(dim);
    const double lr0 = config.initial_lr;
    for (std::int64_t i = 0; i < count; ++i) {
      const double progress =
          static_cast<double>(offset + i * stride) / static_cast<double>(total);
      const double lr = lr0 * (1.0 - 0.99 * std::min(progress, 1.0));

      const auto &edge = graph.edges()[edge_sampler(rng)];
      int source = edge.a;
      int target = edge.b;
      if (coin(rng) < 0.5) std::swap(source, target);

      double *u = &vertex[static_cast<std::size_t>(source) * dim];
      std::fill(error.begin(), error.end(), 0.0);
      for (int d = 0; d <= config.negative_samples; ++d) {
        int ctx_node = target;
        double label = 1.0;
        if (d > 0) {
          ctx_node = static_cast<int>(noise_sampler(rng));
          label = 0.0;
        }
        double *c = &context[static_cast<std::size_t>(ctx_node) * dim];
        double dot = 0.0;
        for (int k = 0; k < dim; ++k) dot += u[k] * c[k];
        const double g = (label - Sigmoid(dot)) * lr;
        for (int k = 0; k < dim; ++k) error[k] += g * c[k];
        for (int k = 0; k < dim; ++k) c[k] += g * u[k];
      }
      for (int k = 0; k < dim; ++k) u[k] += error[k];
    }
  }
};

}  // namespace

EmbeddingTable TrainLine2(const SocialGraph &graph,
                          const NetEmbedConfig &config) {
  if (config.dim <= 0 || config.negative_samples < 1 ||
      !(config.initial_lr > 0.0) || config.threads < 1 ||
      config.total_samples < 0) {
    throw std::invalid_argument("invalid network embedding configuration");
  }
  if (graph.num_edges() == 0) {
    throw DataError("network embedding needs a graph with at least one edge");
  }
  Line2Trainer trainer(graph, config);
  if (config.threads == 1) {
    trainer.Run(0, 1, trainer.total, config.seed + 1);
  } else {
    std::vector<std::thread> workers;
    const std::int64_t per = trainer.total / config.threads;
    for (int w = 0; w < config.threads; ++w) {
      const std::int64_t count =
          w + 1 == config.threads ? trainer.total - per * w : per;
      workers.emplace_back([&trainer, &config, w, count] {
        trainer.Run(w, config.threads, count,
                    config.seed + 1 + 7919ULL * (w + 1));
      });
    }
    for (auto &t : workers) t.join();
  }

  EmbeddingTable table(EmbeddingKind::kUser, config.dim);
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    table.Add(graph.nodes()[v],
              std::span<const double>(&trainer.vertex[v * config.dim],
                                      config.dim));
  }
  return table;
}

}  // namespace sociolink
