#include "topiceval/pipeline.hpp"

#include <algorithm>

#include "topiceval/error.hpp"
#include "topiceval/pca.hpp"

namespace topiceval {

std::string to_string(ClusterBackend backend) {
  return backend == ClusterBackend::hdbscan ? "hdbscan" : "kmeans";
}

PipelineResult run_pipeline(const Corpus& corpus, const EmbeddingMatrix& embeddings, const PipelineConfig& cfg) {
  embeddings.validate();
  if (corpus.size() != embeddings.n_docs) {
    throw Error(ErrorCode::MisalignedInputs, "corpus has " + std::to_string(corpus.size()) + " documents but " +
                                                 std::to_string(embeddings.n_docs) + " embedding rows");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus.doc_ids[i] != embeddings.doc_ids[i]) {
      throw Error(ErrorCode::MisalignedInputs, "doc id mismatch at row " + std::to_string(i) + ": '" +
                                                   corpus.doc_ids[i] + "' vs '" + embeddings.doc_ids[i] + "'");
    }
  }

  PipelineResult result;
  auto& meta = result.metadata;
  meta.config = cfg;
  meta.n_docs = corpus.size();
  meta.input_dim = embeddings.dim;

  const EmbeddingMatrix* points = &embeddings;
  PcaResult pca;
  if (cfg.reduce_dim != 0 && cfg.reduce_dim < embeddings.dim) {
    pca = reduce_pca(embeddings, cfg.reduce_dim);
    meta.pca_degenerate = pca.degenerate;
    points = &pca.projected;
  }
  meta.reduced_dim = points->dim;

  if (cfg.backend == ClusterBackend::hdbscan) {
    result.assignment = hdbscan(*points, cfg.min_cluster_size, cfg.min_samples).assignment;
  } else {
    result.assignment = kmeans(*points, cfg.kmeans_k, cfg.seed, cfg.kmeans_max_iters).assignment;
  }
  meta.k = result.assignment.k;
  meta.noise_count = result.assignment.noise_count();
  meta.noise_fraction = static_cast<double>(meta.noise_count) / static_cast<double>(meta.n_docs);

  result.topics = ctfidf(corpus.bow, result.assignment, cfg.top_n);
  return result;
}

}  // namespace topiceval
