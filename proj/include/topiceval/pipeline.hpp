#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "topiceval/clustering.hpp"
#include "topiceval/embeddings.hpp"
#include "topiceval/textprep.hpp"
#include "topiceval/topics.hpp"

namespace topiceval {

/// Class-based TF-IDF over clusters: W(t,c) = tf(t,c) * ln(1 + A / f(t)),
/// where A is the mean token count per (non-empty) cluster.
struct CtfidfModel {
  std::vector<int> labels;                   // clusters kept, ascending
  std::vector<std::vector<double>> weights;  // per kept cluster, over vocab
  std::vector<std::vector<std::uint64_t>> term_counts;
  std::vector<std::uint64_t> term_totals;    // f(t) over kept clusters
  double avg_tokens = 0.0;                   // A
};

/// Noise documents are ignored and clusters without tokens are dropped.
/// Throws MisalignedInputs, NoClusters.
CtfidfModel fit_ctfidf(const BowCorpus& corpus, const ClusterAssignment& assignment);

/// Top words per cluster by W (ties by ascending id, zero weights never
/// emitted); distributions are the normalized W rows.
TopicSet ctfidf(const BowCorpus& corpus, const ClusterAssignment& assignment, std::size_t top_n);

enum class ClusterBackend { hdbscan, kmeans };

struct PipelineConfig {
  std::size_t reduce_dim = 5;  // 0 keeps the input dimension
  ClusterBackend backend = ClusterBackend::hdbscan;
  std::size_t min_cluster_size = 10;
  std::size_t min_samples = 0;  // 0 means min_cluster_size
  std::size_t kmeans_k = 10;
  std::size_t kmeans_max_iters = 300;
  std::uint64_t seed = 42;
  std::size_t top_n = 10;
};

struct PipelineMetadata {
  PipelineConfig config;
  std::size_t n_docs = 0;
  std::size_t input_dim = 0;
  std::size_t reduced_dim = 0;
  bool pca_degenerate = false;
  std::size_t k = 0;
  std::size_t noise_count = 0;
  double noise_fraction = 0.0;
};

struct PipelineResult {
  TopicSet topics;
  ClusterAssignment assignment;
  PipelineMetadata metadata;
};

/// reduce (PCA) -> cluster -> c-TF-IDF. Corpus and embedding doc ids must
/// match row for row; throws MisalignedInputs otherwise.
PipelineResult run_pipeline(const Corpus& corpus, const EmbeddingMatrix& embeddings, const PipelineConfig& cfg);

std::string to_string(ClusterBackend backend);

}  // namespace topiceval
