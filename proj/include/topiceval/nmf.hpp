#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "topiceval/textprep.hpp"
#include "topiceval/topics.hpp"

namespace topiceval {

struct NmfConfig {
  std::size_t k = 10;
  std::size_t max_iters = 200;
  double tol = 1e-4;  // stop once the relative objective change falls below
  std::uint64_t seed = 42;
};

/// V ~ W H with W (m x k) and H (k x n) non-negative.
struct NmfFactors {
  Eigen::MatrixXd W;
  Eigen::MatrixXd H;
  /// ||V - WH||_F: entry 0 is the initial factors, entry i after iteration i.
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
};

/// Denominator guard in the multiplicative updates.
inline constexpr double kNmfDelta = 1e-12;

/// Lee-Seung multiplicative updates for the Frobenius objective:
///   H <- H .* (W'V) ./ (W'WH + delta),  W <- W .* (VH') ./ (WHH' + delta)
/// from a uniform(0,1) seeded start. Throws NegativeInput, InvalidArgument.
NmfFactors nmf_fit(const Eigen::MatrixXd& V, const NmfConfig& cfg);
NmfFactors nmf_fit(const Eigen::SparseMatrix<double>& V, const NmfConfig& cfg);

/// ||V - WH||_F / ||V||_F (the absolute error when V is zero).
double nmf_relative_error(const Eigen::MatrixXd& V, const NmfFactors& factors);

/// Sparse docs x vocab matrix of TF-IDF weights (or raw counts).
Eigen::SparseMatrix<double> document_term_matrix(const BowCorpus& corpus, bool use_tfidf);

/// One topic per row of H.
TopicSet nmf_topics(const NmfFactors& factors, std::size_t top_n);

}  // namespace topiceval
