#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "topiceval/clustering.hpp"
#include "topiceval/error.hpp"

namespace topiceval {

std::size_t ClusterAssignment::noise_count() const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (const auto l : labels) {
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  }
  return sizes;
}

double squared_distance(const EmbeddingMatrix& x, std::size_t i, std::size_t j) noexcept {
  const double* a = x.data.data() + i * x.dim;
  const double* b = x.data.data() + j * x.dim;
  double s = 0.0;
  for (std::size_t c = 0; c < x.dim; ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double point_centroid_sq(const EmbeddingMatrix& x, std::size_t i, const std::vector<double>& centroids,
                         std::size_t c) {
  const double* a = x.data.data() + i * x.dim;
  const double* b = centroids.data() + c * x.dim;
  double s = 0.0;
  for (std::size_t j = 0; j < x.dim; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

void nearest(const EmbeddingMatrix& x, const std::vector<double>& centroids, std::size_t k, std::size_t i,
             std::vector<int>& labels, std::vector<double>& sq_dist) {
  double best = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double d = point_centroid_sq(x, i, centroids, c);
    if (d < best) {
      best = d;
      arg = static_cast<int>(c);
    }
  }
  labels[i] = arg;
  sq_dist[i] = best;
}

std::vector<double> plus_plus_init(const EmbeddingMatrix& x, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = x.n_docs;
  std::vector<double> centroids;
  centroids.reserve(k * x.dim);
  const auto take = [&](std::size_t i) {
    const auto r = x.row(i);
    centroids.insert(centroids.end(), r.begin(), r.end());
  };
  take(std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n))));

  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::min(best[i], point_centroid_sq(x, i, centroids, c - 1));
      total += best[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double u = uniform01(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += best[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
    }
    take(pick);
  }
  return centroids;
}

}  // namespace

void assign_nearest(const EmbeddingMatrix& x, const std::vector<double>& centroids, std::size_t k,
                    std::vector<int>& labels, std::vector<double>& sq_dist) {
  labels.resize(x.n_docs);
  sq_dist.resize(x.n_docs);
  const auto n = static_cast<std::int64_t>(x.n_docs);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) nearest(x, centroids, k, static_cast<std::size_t>(i), labels, sq_dist);
}

namespace serial {

void assign_nearest(const EmbeddingMatrix& x, const std::vector<double>& centroids, std::size_t k,
                    std::vector<int>& labels, std::vector<double>& sq_dist) {
  labels.resize(x.n_docs);
  sq_dist.resize(x.n_docs);
  for (std::size_t i = 0; i < x.n_docs; ++i) nearest(x, centroids, k, i, labels, sq_dist);
}

}  // namespace serial

KMeansResult kmeans(const EmbeddingMatrix& x, std::size_t k, std::uint64_t seed, std::size_t max_iters) {
  x.validate();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k-means needs k >= 1");
  if (k > x.n_docs) throw Error(ErrorCode::TooFewPoints, "k-means k exceeds the number of points");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");

  std::mt19937_64 rng(seed);
  KMeansResult r;
  r.centroids = plus_plus_init(x, k, rng);
  std::vector<int> labels;
  std::vector<double> sq;
  std::vector<int> previous;
  const std::size_t dim = x.dim;

  for (std::size_t it = 0; it < max_iters; ++it) {
    assign_nearest(x, r.centroids, k, labels, sq);
    r.inertia_trace.push_back(std::accumulate(sq.begin(), sq.end(), 0.0));
    r.iterations = it + 1;
    if (labels == previous) break;
    previous = labels;

    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < x.n_docs; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += x.at(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        const auto far = static_cast<std::size_t>(std::max_element(sq.begin(), sq.end()) - sq.begin());
        const auto row = x.row(far);
        std::copy(row.begin(), row.end(), r.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
        sq[far] = 0.0;
        continue;
      }
      for (std::size_t j = 0; j < dim; ++j) r.centroids[c * dim + j] = sums[c * dim + j] / static_cast<double>(counts[c]);
    }
  }

  // Compact away clusters that ended empty so labels stay 0..k-1.
  std::vector<int> remap(k, -1);
  int next = 0;
  for (const auto l : labels) {
    auto& m = remap[static_cast<std::size_t>(l)];
    if (m < 0) m = next++;
  }
  std::vector<double> kept;
  std::vector<int> order(static_cast<std::size_t>(next));
  for (std::size_t c = 0; c < k; ++c) {
    if (remap[c] >= 0) order[static_cast<std::size_t>(remap[c])] = static_cast<int>(c);
  }
  for (const auto c : order) {
    kept.insert(kept.end(), r.centroids.begin() + c * static_cast<std::ptrdiff_t>(dim),
                r.centroids.begin() + (c + 1) * static_cast<std::ptrdiff_t>(dim));
  }
  r.centroids = std::move(kept);
  for (auto& l : labels) l = remap[static_cast<std::size_t>(l)];
  r.assignment.labels = std::move(labels);
  r.assignment.k = static_cast<std::size_t>(next);
  return r;
}

}  // namespace topiceval
