#include "topiceval/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <type_traits>

#include "topiceval/error.hpp"

namespace topiceval {

namespace {

double frobenius_error(const Eigen::MatrixXd& V, const Eigen::MatrixXd& W, const Eigen::MatrixXd& H) {
  return (V - W * H).norm();
}

// Expanded form over the non-zeros of V; clamped since cancellation can push
// a near-zero residual slightly negative.
double frobenius_error(const Eigen::SparseMatrix<double>& V, const Eigen::MatrixXd& W, const Eigen::MatrixXd& H) {
  double vv = 0.0;
  double cross = 0.0;
  for (Eigen::Index c = 0; c < V.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(V, c); it; ++it) {
      vv += it.value() * it.value();
      cross += it.value() * W.row(it.row()).dot(H.col(it.col()));
    }
  }
  const double wh = ((W.transpose() * W) * (H * H.transpose())).trace();
  return std::sqrt(std::max(0.0, vv - 2.0 * cross + wh));
}

template <typename Matrix>
void check_input(const Matrix& V, const NmfConfig& cfg) {
  if (cfg.k < 1) throw Error(ErrorCode::InvalidArgument, "NMF rank k must be >= 1");
  if (static_cast<Eigen::Index>(cfg.k) > std::min(V.rows(), V.cols())) {
    throw Error(ErrorCode::InvalidArgument, "NMF rank k exceeds min(rows, cols)");
  }
  if constexpr (std::is_same_v<Matrix, Eigen::MatrixXd>) {
    if (!V.allFinite()) throw Error(ErrorCode::NonFiniteValue, "NMF input has non-finite entries");
    if ((V.array() < 0.0).any()) throw Error(ErrorCode::NegativeInput, "NMF input has negative entries");
  } else {
    for (Eigen::Index c = 0; c < V.outerSize(); ++c) {
      for (typename Matrix::InnerIterator it(V, c); it; ++it) {
        if (!std::isfinite(it.value())) throw Error(ErrorCode::NonFiniteValue, "NMF input has non-finite entries");
        if (it.value() < 0.0) throw Error(ErrorCode::NegativeInput, "NMF input has negative entries");
      }
    }
  }
}

template <typename Matrix>
NmfFactors fit(const Matrix& V, const NmfConfig& cfg) {
  check_input(V, cfg);
  const auto m = V.rows();
  const auto n = V.cols();
  const auto k = static_cast<Eigen::Index>(cfg.k);

  std::mt19937_64 rng(cfg.seed);
  const auto draw = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  NmfFactors f;
  f.W.resize(m, k);
  f.H.resize(k, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) f.W(i, j) = draw();
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) f.H(i, j) = draw();
  }

  f.objective_trace.push_back(frobenius_error(V, f.W, f.H));
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const Eigen::MatrixXd WtV = (V.transpose() * f.W).transpose();
    const Eigen::MatrixXd WtWH = (f.W.transpose() * f.W) * f.H;
    f.H = f.H.cwiseProduct(WtV.cwiseQuotient((WtWH.array() + kNmfDelta).matrix()));

    const Eigen::MatrixXd VHt = V * f.H.transpose();
    const Eigen::MatrixXd WHHt = f.W * (f.H * f.H.transpose());
    f.W = f.W.cwiseProduct(VHt.cwiseQuotient((WHHt.array() + kNmfDelta).matrix()));

    const double prev = f.objective_trace.back();
    const double cur = frobenius_error(V, f.W, f.H);
    f.objective_trace.push_back(cur);
    f.iterations = it + 1;
    if (prev == 0.0 || std::abs(prev - cur) / prev < cfg.tol) break;
  }
  return f;
}

}  // namespace

NmfFactors nmf_fit(const Eigen::MatrixXd& V, const NmfConfig& cfg) { return fit(V, cfg); }

NmfFactors nmf_fit(const Eigen::SparseMatrix<double>& V, const NmfConfig& cfg) { return fit(V, cfg); }

double nmf_relative_error(const Eigen::MatrixXd& V, const NmfFactors& factors) {
  const double err = frobenius_error(V, factors.W, factors.H);
  const double norm = V.norm();
  return norm == 0.0 ? err : err / norm;
}

Eigen::SparseMatrix<double> document_term_matrix(const BowCorpus& corpus, bool use_tfidf) {
  if (corpus.docs.empty() || !corpus.vocab) throw Error(ErrorCode::EmptyCorpus, "empty corpus");
  std::vector<Eigen::Triplet<double>> triplets;
  if (use_tfidf) {
    const auto rows = tfidf(corpus);
    for (std::size_t d = 0; d < rows.size(); ++d) {
      for (const auto& e : rows[d]) {
        if (e.weight != 0.0) triplets.emplace_back(static_cast<int>(d), static_cast<int>(e.id), e.weight);
      }
    }
  } else {
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
      for (const auto& e : corpus.docs[d]) triplets.emplace_back(static_cast<int>(d), static_cast<int>(e.id), e.count);
    }
  }
  Eigen::SparseMatrix<double> V(static_cast<Eigen::Index>(corpus.docs.size()),
                                static_cast<Eigen::Index>(corpus.vocab->size()));
  V.setFromTriplets(triplets.begin(), triplets.end());
  return V;
}

TopicSet nmf_topics(const NmfFactors& factors, std::size_t top_n) {
  TopicSet set;
  for (Eigen::Index t = 0; t < factors.H.rows(); ++t) {
    const Eigen::VectorXd row = factors.H.row(t).transpose();
    const std::span<const double> weights(row.data(), static_cast<std::size_t>(row.size()));
    if (!(row.sum() > 0.0)) continue;  // a collapsed component carries no topic
    set.topics.push_back(make_topic_entry(static_cast<int>(t), weights, top_n));
  }
  return set;
}

}  // namespace topiceval
