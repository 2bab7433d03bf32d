#include "topiceval/pca.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "topiceval/error.hpp"

namespace topiceval {

PcaResult reduce_pca(const EmbeddingMatrix& x, std::size_t d) {
  x.validate();
  if (x.n_docs == 0) throw Error(ErrorCode::EmptyEmbeddings, "PCA of zero rows");
  if (d < 1 || d > x.dim) throw Error(ErrorCode::InvalidArgument, "PCA target dim must be in [1, dim]");

  const auto n = static_cast<Eigen::Index>(x.n_docs);
  const auto dim = static_cast<Eigen::Index>(x.dim);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> raw(x.data.data(), n,
                                                                                                      dim);
  const Eigen::RowVectorXd mean = raw.colwise().mean();
  const Eigen::MatrixXd centred = raw.rowwise() - mean;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd cov = (centred.transpose() * centred) / denom;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "covariance eigensolver failed");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  PcaResult r;
  r.total_variance = std::max(0.0, cov.trace());
  const double largest = std::max(0.0, values(dim - 1));
  const double cutoff = largest * 1e-10;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (largest > 0.0 && values(i) > cutoff) ++r.rank;
  }

  const auto out_dim = static_cast<Eigen::Index>(d);
  r.components.resize(dim, out_dim);
  for (Eigen::Index c = 0; c < out_dim; ++c) {
    Eigen::VectorXd v = vectors.col(dim - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    r.components.col(c) = v;
    r.explained_variance.push_back(std::max(0.0, values(dim - 1 - c)));
  }
  r.degenerate = r.rank < d;

  Eigen::MatrixXd projected = centred * r.components;
  for (Eigen::Index c = static_cast<Eigen::Index>(r.rank); c < out_dim; ++c) {
    projected.col(c).setZero();
    r.explained_variance[static_cast<std::size_t>(c)] = 0.0;
  }

  r.projected.n_docs = x.n_docs;
  r.projected.dim = d;
  r.projected.doc_ids = x.doc_ids;
  r.projected.data.resize(x.n_docs * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < out_dim; ++c) r.projected.data[static_cast<std::size_t>(i * out_dim + c)] = projected(i, c);
  }
  return r;
}

}  // namespace topiceval
