#include <cmath>

#include "topiceval/error.hpp"
#include "topiceval/pipeline.hpp"

namespace topiceval {

CtfidfModel fit_ctfidf(const BowCorpus& corpus, const ClusterAssignment& assignment) {
  if (!corpus.vocab) throw Error(ErrorCode::EmptyCorpus, "corpus has no vocabulary");
  if (assignment.labels.size() != corpus.docs.size()) {
    throw Error(ErrorCode::MisalignedInputs, "cluster labels do not match the document count");
  }
  const std::size_t V = corpus.vocab->size();
  std::vector<std::vector<std::uint64_t>> counts(assignment.k, std::vector<std::uint64_t>(V, 0));
  std::vector<std::uint64_t> cluster_tokens(assignment.k, 0);
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const int label = assignment.labels[d];
    if (label < 0) continue;
    if (static_cast<std::size_t>(label) >= assignment.k) {
      throw Error(ErrorCode::InvalidArgument, "cluster label out of range");
    }
    for (const auto& e : corpus.docs[d]) {
      counts[static_cast<std::size_t>(label)][e.id] += e.count;
      cluster_tokens[static_cast<std::size_t>(label)] += e.count;
    }
  }

  CtfidfModel m;
  m.term_totals.assign(V, 0);
  std::uint64_t total_tokens = 0;
  for (std::size_t c = 0; c < assignment.k; ++c) {
    if (cluster_tokens[c] == 0) continue;
    m.labels.push_back(static_cast<int>(c));
    for (std::size_t t = 0; t < V; ++t) m.term_totals[t] += counts[c][t];
    total_tokens += cluster_tokens[c];
    m.term_counts.push_back(std::move(counts[c]));
  }
  if (m.labels.empty()) throw Error(ErrorCode::NoClusters, "no non-noise cluster contains any token");
  m.avg_tokens = static_cast<double>(total_tokens) / static_cast<double>(m.labels.size());

  for (const auto& tf : m.term_counts) {
    std::vector<double> w(V, 0.0);
    for (std::size_t t = 0; t < V; ++t) {
      if (tf[t] == 0) continue;
      w[t] = static_cast<double>(tf[t]) * std::log(1.0 + m.avg_tokens / static_cast<double>(m.term_totals[t]));
    }
    m.weights.push_back(std::move(w));
  }
  return m;
}

TopicSet ctfidf(const BowCorpus& corpus, const ClusterAssignment& assignment, std::size_t top_n) {
  const auto model = fit_ctfidf(corpus, assignment);
  TopicSet set;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    const auto& w = model.weights[i];
    std::size_t positive = 0;
    for (const auto v : w) positive += v > 0.0 ? 1 : 0;
    auto entry = make_topic_entry(model.labels[i], w, std::min(top_n, positive));
    set.topics.push_back(std::move(entry));
  }
  return set;
}

}  // namespace topiceval
