#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "topiceval/embeddings.hpp"

namespace topiceval {

struct PcaResult {
  EmbeddingMatrix projected;                // n_docs x d, same doc ids
  Eigen::MatrixXd components;               // dim x d, orthonormal columns
  std::vector<double> explained_variance;   // descending, length d
  double total_variance = 0.0;
  std::size_t rank = 0;                     // numerical rank of the covariance
  bool degenerate = false;                  // rank < d; projected columns past rank are zero
};

/// Mean-centred projection onto the top-d principal directions. Each
/// component's largest-magnitude loading is made positive. A covariance of
/// rank < d is reported through `degenerate`, not thrown.
PcaResult reduce_pca(const EmbeddingMatrix& x, std::size_t d);

}  // namespace topiceval
