// Serial reference vs OpenMP kernel, one pair of benchmarks per kernel.

#include <random>

#include <benchmark/benchmark.h>

#include "topiceval/clustering.hpp"
#include "topiceval/cooccur.hpp"
#include "topiceval/divergence.hpp"
#include "topiceval/textprep.hpp"

using namespace topiceval;

namespace {

std::vector<std::vector<TokenId>> random_sequences(std::size_t n_docs, std::size_t v, std::size_t len) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<TokenId> word(0, static_cast<TokenId>(v - 1));
  std::vector<std::vector<TokenId>> docs(n_docs, std::vector<TokenId>(len));
  for (auto& d : docs) {
    for (auto& t : d) t = word(rng);
  }
  return docs;
}

std::vector<TokenId> first_words(std::size_t n) {
  std::vector<TokenId> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<TokenId>(i);
  return w;
}

EmbeddingMatrix random_points(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  EmbeddingMatrix m;
  m.n_docs = n;
  m.dim = dim;
  m.data.resize(n * dim);
  for (auto& x : m.data) x = g(rng);
  for (std::size_t i = 0; i < n; ++i) m.doc_ids.push_back(std::to_string(i));
  return m;
}

std::vector<TopicWordDist> random_topics(std::size_t k, std::size_t v) {
  std::mt19937_64 rng(3);
  std::gamma_distribution<double> g(0.1);
  std::vector<TopicWordDist> out;
  for (std::size_t t = 0; t < k; ++t) {
    std::vector<double> w(v);
    for (auto& x : w) x = g(rng) + 1e-9;
    out.push_back(TopicWordDist::from_weights(w));
  }
  return out;
}

std::vector<std::vector<std::string>> random_token_docs(std::size_t n_docs) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> word(0, 20000);
  std::vector<std::vector<std::string>> docs(n_docs, std::vector<std::string>(100));
  for (auto& d : docs) {
    for (auto& t : d) t = "w" + std::to_string(word(rng));
  }
  return docs;
}

void BM_WindowStats(benchmark::State& state) {
  const auto docs = random_sequences(2000, 1000, 200);
  const auto words = first_words(100);
  for (auto _ : state) benchmark::DoNotOptimize(count_window_stats(docs, words, 110));
}

void BM_WindowStatsSerial(benchmark::State& state) {
  const auto docs = random_sequences(2000, 1000, 200);
  const auto words = first_words(100);
  for (auto _ : state) benchmark::DoNotOptimize(serial::count_window_stats(docs, words, 110));
}

void BM_PairwiseJsd(benchmark::State& state) {
  const auto topics = random_topics(50, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(avg_pairwise_divergence(topics, DivergenceMeasure::jsd));
}

void BM_PairwiseJsdSerial(benchmark::State& state) {
  const auto topics = random_topics(50, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(serial::avg_pairwise_divergence(topics, DivergenceMeasure::jsd));
}

void BM_CoreDistances(benchmark::State& state) {
  const auto x = random_points(2000, 5);
  for (auto _ : state) benchmark::DoNotOptimize(core_distances(x, 10));
}

void BM_CoreDistancesSerial(benchmark::State& state) {
  const auto x = random_points(2000, 5);
  for (auto _ : state) benchmark::DoNotOptimize(serial::core_distances(x, 10));
}

void BM_AssignNearest(benchmark::State& state) {
  const auto x = random_points(20000, 16);
  const auto c = random_points(50, 16).data;
  std::vector<int> labels;
  std::vector<double> d;
  for (auto _ : state) {
    assign_nearest(x, c, 50, labels, d);
    benchmark::DoNotOptimize(labels.data());
  }
}

void BM_AssignNearestSerial(benchmark::State& state) {
  const auto x = random_points(20000, 16);
  const auto c = random_points(50, 16).data;
  std::vector<int> labels;
  std::vector<double> d;
  for (auto _ : state) {
    serial::assign_nearest(x, c, 50, labels, d);
    benchmark::DoNotOptimize(labels.data());
  }
}

void BM_Vocabulary(benchmark::State& state) {
  const auto docs = random_token_docs(5000);
  for (auto _ : state) benchmark::DoNotOptimize(build_vocabulary(docs));
}

void BM_VocabularySerial(benchmark::State& state) {
  const auto docs = random_token_docs(5000);
  for (auto _ : state) benchmark::DoNotOptimize(build_vocabulary_serial(docs));
}

}  // namespace

BENCHMARK(BM_WindowStats)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowStatsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseJsd)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseJsdSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoreDistances)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoreDistancesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssignNearest)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssignNearestSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Vocabulary)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VocabularySerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
