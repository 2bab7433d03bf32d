#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "topiceval/embeddings.hpp"

namespace topiceval {

inline constexpr int kNoise = -1;

/// Per-document cluster labels; -1 marks noise. Labels are 0..k-1 and every
/// cluster is non-empty.
struct ClusterAssignment {
  std::vector<int> labels;
  std::size_t k = 0;

  std::size_t noise_count() const noexcept;
  std::vector<std::size_t> cluster_sizes() const;
};

/// Squared Euclidean distance between rows.
double squared_distance(const EmbeddingMatrix& x, std::size_t i, std::size_t j) noexcept;

// ---------------------------------------------------------------- k-means

struct KMeansResult {
  ClusterAssignment assignment;
  std::vector<double> centroids;      // k x dim, row-major
  std::vector<double> inertia_trace;  // one entry per assignment step
  std::size_t iterations = 0;
};

/// Lloyd iterations from a k-means++ start. Clusters that end up empty are
/// dropped (labels are compacted). Throws TooFewPoints when k > n_docs.
KMeansResult kmeans(const EmbeddingMatrix& x, std::size_t k, std::uint64_t seed, std::size_t max_iters);

/// Nearest centroid per row (ties to the lower index), with squared distances.
void assign_nearest(const EmbeddingMatrix& x, const std::vector<double>& centroids, std::size_t k,
                    std::vector<int>& labels, std::vector<double>& sq_dist);

// ---------------------------------------------------------------- HDBSCAN

struct MstEdge {
  std::size_t a;
  std::size_t b;
  double weight;
};

/// Distance from each point to its min_samples-th nearest neighbour, counting
/// the point itself as the first.
std::vector<double> core_distances(const EmbeddingMatrix& x, std::size_t min_samples);

/// Prim's algorithm over the dense mutual-reachability graph
/// max(core(a), core(b), d(a, b)); edges returned in insertion order.
std::vector<MstEdge> mutual_reachability_mst(const EmbeddingMatrix& x, const std::vector<double>& core);

struct CondensedCluster {
  int parent = -1;             // -1 for the root
  double birth_lambda = 0.0;
  std::size_t size = 0;
  std::vector<int> children;
  double stability = 0.0;
  bool selected = false;
};

struct HdbscanResult {
  ClusterAssignment assignment;
  std::vector<double> core_distances;
  std::vector<MstEdge> mst;
  std::vector<CondensedCluster> condensed;  // index 0 is the root
  std::vector<double> outlier_lambda;       // lambda at which each point left its cluster
};

/// core distances -> mutual-reachability MST -> single-linkage hierarchy ->
/// condensed tree at min_cluster_size -> excess-of-mass selection. When the
/// root never splits into two clusters every point joins one cluster.
/// min_samples of 0 means min_cluster_size. Throws TooFewPoints.
HdbscanResult hdbscan(const EmbeddingMatrix& x, std::size_t min_cluster_size, std::size_t min_samples = 0);

namespace serial {
std::vector<double> core_distances(const EmbeddingMatrix& x, std::size_t min_samples);
void assign_nearest(const EmbeddingMatrix& x, const std::vector<double>& centroids, std::size_t k,
                    std::vector<int>& labels, std::vector<double>& sq_dist);
}  // namespace serial

}  // namespace topiceval
