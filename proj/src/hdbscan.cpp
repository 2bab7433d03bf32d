#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "topiceval/clustering.hpp"
#include "topiceval/error.hpp"

namespace topiceval {

namespace {

double core_distance_of(const EmbeddingMatrix& x, std::size_t i, std::size_t min_samples, std::vector<double>& buf) {
  buf.resize(x.n_docs);
  for (std::size_t j = 0; j < x.n_docs; ++j) buf[j] = squared_distance(x, i, j);
  const auto kth = buf.begin() + static_cast<std::ptrdiff_t>(min_samples - 1);
  std::nth_element(buf.begin(), kth, buf.end());
  return std::sqrt(*kth);
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // Attaches both roots under `into`, which must be a fresh node.
  void link(std::size_t a, std::size_t b, std::size_t into) {
    parent_[a] = into;
    parent_[b] = into;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Dendrogram {
  // Internal node n + i merges left[i] and right[i] at distance[i].
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  std::vector<double> distance;
  std::vector<std::size_t> size;  // indexed by node id (points have size 1)
};

Dendrogram single_linkage(std::size_t n, std::vector<MstEdge> edges) {
  std::stable_sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) { return a.weight < b.weight; });
  Dendrogram tree;
  tree.size.assign(2 * n - 1, 1);
  UnionFind uf(2 * n - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto ra = uf.find(edges[i].a);
    const auto rb = uf.find(edges[i].b);
    const std::size_t node = n + i;
    uf.link(ra, rb, node);
    tree.left.push_back(ra);
    tree.right.push_back(rb);
    tree.distance.push_back(edges[i].weight);
    tree.size[node] = tree.size[ra] + tree.size[rb];
  }
  return tree;
}

void collect_points(const Dendrogram& tree, std::size_t n, std::size_t node, std::vector<std::size_t>& out) {
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v < n) {
      out.push_back(v);
    } else {
      stack.push_back(tree.right[v - n]);
      stack.push_back(tree.left[v - n]);
    }
  }
}

}  // namespace

std::vector<double> core_distances(const EmbeddingMatrix& x, std::size_t min_samples) {
  if (min_samples < 1 || min_samples > x.n_docs) throw Error(ErrorCode::InvalidArgument, "min_samples out of range");
  std::vector<double> core(x.n_docs);
  const auto n = static_cast<std::int64_t>(x.n_docs);
#pragma omp parallel
  {
    std::vector<double> buf;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) core[i] = core_distance_of(x, static_cast<std::size_t>(i), min_samples, buf);
  }
  return core;
}

namespace serial {

std::vector<double> core_distances(const EmbeddingMatrix& x, std::size_t min_samples) {
  if (min_samples < 1 || min_samples > x.n_docs) throw Error(ErrorCode::InvalidArgument, "min_samples out of range");
  std::vector<double> core(x.n_docs);
  for (std::size_t i = 0; i < x.n_docs; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < x.n_docs; ++j) d.push_back(std::sqrt(squared_distance(x, i, j)));
    std::sort(d.begin(), d.end());
    core[i] = d[min_samples - 1];
  }
  return core;
}

}  // namespace serial

std::vector<MstEdge> mutual_reachability_mst(const EmbeddingMatrix& x, const std::vector<double>& core) {
  const std::size_t n = x.n_docs;
  std::vector<MstEdge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    double next_w = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double mr = std::max({core[current], core[j], std::sqrt(squared_distance(x, current, j))});
      if (mr < best[j]) {
        best[j] = mr;
        from[j] = current;
      }
      if (best[j] < next_w || next == n) {
        next_w = best[j];
        next = j;
      }
    }
    edges.push_back({from[next], next, next_w});
    in_tree[next] = 1;
    current = next;
  }
  return edges;
}

HdbscanResult hdbscan(const EmbeddingMatrix& x, std::size_t min_cluster_size, std::size_t min_samples) {
  x.validate();
  if (min_cluster_size < 2) throw Error(ErrorCode::InvalidArgument, "min_cluster_size must be >= 2");
  const std::size_t n = x.n_docs;
  if (n < min_cluster_size) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(n) + " points is fewer than min_cluster_size");
  }
  if (min_samples == 0) min_samples = min_cluster_size;
  min_samples = std::min(min_samples, n);

  HdbscanResult r;
  r.core_distances = core_distances(x, min_samples);
  r.mst = mutual_reachability_mst(x, r.core_distances);
  const Dendrogram tree = single_linkage(n, r.mst);

  double max_weight = 0.0;
  for (const auto& e : r.mst) max_weight = std::max(max_weight, e.weight);
  // Zero distances (duplicate points) get a finite lambda.
  const double floor = max_weight > 0.0 ? max_weight * 1e-12 : 1.0;
  const auto lambda_of = [floor](double distance) { return 1.0 / std::max(distance, floor); };

  r.outlier_lambda.assign(n, 0.0);
  std::vector<int> fell_from(n, 0);
  r.condensed.push_back({-1, 0.0, n, {}, 0.0, false});

  // Walk the dendrogram top-down; `work` holds (node, condensed cluster).
  const std::size_t root = 2 * n - 2;
  std::vector<std::pair<std::size_t, int>> work;
  if (n == 1) {
    fell_from[0] = 0;
  } else {
    work.emplace_back(root, 0);
  }
  std::vector<std::size_t> points;
  const auto drop = [&](std::size_t node, int cluster, double lambda) {
    points.clear();
    collect_points(tree, n, node, points);
    for (const auto p : points) {
      r.outlier_lambda[p] = lambda;
      fell_from[p] = cluster;
      r.condensed[static_cast<std::size_t>(cluster)].stability +=
          lambda - r.condensed[static_cast<std::size_t>(cluster)].birth_lambda;
    }
  };
  while (!work.empty()) {
    const auto [node, cluster] = work.back();
    work.pop_back();
    const std::size_t i = node - n;
    const double lambda = lambda_of(tree.distance[i]);
    const std::size_t l = tree.left[i];
    const std::size_t rgt = tree.right[i];
    const bool big_l = tree.size[l] >= min_cluster_size;
    const bool big_r = tree.size[rgt] >= min_cluster_size;
    if (big_l && big_r) {
      for (const auto child : {l, rgt}) {
        const int id = static_cast<int>(r.condensed.size());
        r.condensed.push_back({cluster, lambda, tree.size[child], {}, 0.0, false});
        auto& parent = r.condensed[static_cast<std::size_t>(cluster)];
        parent.children.push_back(id);
        parent.stability += (lambda - parent.birth_lambda) * static_cast<double>(tree.size[child]);
        work.emplace_back(child, id);
      }
    } else {
      if (big_l) {
        work.emplace_back(l, cluster);
      } else {
        drop(l, cluster, lambda);
      }
      if (big_r) {
        work.emplace_back(rgt, cluster);
      } else {
        drop(rgt, cluster, lambda);
      }
    }
  }

  // Excess-of-mass selection, leaves first (children always have larger ids).
  auto& clusters = r.condensed;
  std::vector<double> subtree(clusters.size(), 0.0);
  for (std::size_t c = clusters.size(); c-- > 1;) {
    auto& node = clusters[c];
    if (node.children.empty()) {
      node.selected = true;
      subtree[c] = node.stability;
      continue;
    }
    double child_sum = 0.0;
    for (const auto ch : node.children) child_sum += subtree[static_cast<std::size_t>(ch)];
    if (child_sum > node.stability) {
      node.selected = false;
      subtree[c] = child_sum;
    } else {
      node.selected = true;
      subtree[c] = node.stability;
      std::vector<int> stack(node.children.begin(), node.children.end());
      while (!stack.empty()) {
        const auto d = static_cast<std::size_t>(stack.back());
        stack.pop_back();
        clusters[d].selected = false;
        stack.insert(stack.end(), clusters[d].children.begin(), clusters[d].children.end());
      }
    }
  }
  if (clusters.size() == 1) clusters[0].selected = true;

  // Each point belongs to the selected cluster on its ancestor chain.
  std::vector<int> raw(n, kNoise);
  for (std::size_t p = 0; p < n; ++p) {
    for (int c = fell_from[p]; c >= 0; c = clusters[static_cast<std::size_t>(c)].parent) {
      if (clusters[static_cast<std::size_t>(c)].selected) {
        raw[p] = c;
        break;
      }
    }
  }
  // Number clusters by their lowest member index.
  std::vector<int> remap(clusters.size(), -1);
  int next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (raw[p] < 0) continue;
    auto& m = remap[static_cast<std::size_t>(raw[p])];
    if (m < 0) m = next++;
  }
  r.assignment.labels.resize(n);
  for (std::size_t p = 0; p < n; ++p) r.assignment.labels[p] = raw[p] < 0 ? kNoise : remap[static_cast<std::size_t>(raw[p])];
  r.assignment.k = static_cast<std::size_t>(next);
  return r;
}

}  // namespace topiceval
