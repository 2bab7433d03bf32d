#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "topiceval/textprep.hpp"
#include "topiceval/topics.hpp"

namespace topiceval {

struct LdaConfig {
  std::size_t k = 10;
  std::optional<double> alpha;  // symmetric; defaults to 50 / k
  double beta = 0.01;
  std::size_t sweeps = 1000;
  std::uint64_t seed = 42;

  double effective_alpha() const noexcept { return alpha.value_or(50.0 / static_cast<double>(k)); }
  void validate() const;
};

/// Collapsed Gibbs sampler state. Tokens of a document are laid out in
/// bag-of-words order (ascending id, repeated by count).
struct LdaState {
  std::size_t k = 0;
  std::size_t vocab_size = 0;
  std::vector<std::vector<TokenId>> tokens;
  std::vector<std::vector<std::uint32_t>> z;
  std::vector<std::uint64_t> n_dk;  // docs x k
  std::vector<std::uint64_t> n_kw;  // k x vocab
  std::vector<std::uint64_t> n_k;

  std::size_t n_docs() const noexcept { return tokens.size(); }
  /// Recomputes every count from z and compares.
  bool counts_consistent() const;
};

using SweepCallback = std::function<void(std::size_t sweep, const LdaState& state)>;

/// Runs cfg.sweeps full Gibbs sweeps with
///   p(z = k) ~ (n_dk + alpha) (n_kw + beta) / (n_k + V beta)
/// (counts exclude the token being resampled). Deterministic given the seed.
/// Throws EmptyCorpus, EmptyDocument.
LdaState lda_fit(const BowCorpus& corpus, const LdaConfig& cfg, const SweepCallback& on_sweep = {});

/// phi_k[w] = (n_kw + beta) / (n_k + V beta)
std::vector<TopicWordDist> lda_phi(const LdaState& state, double beta);
/// theta_d[k] = (n_dk + alpha) / (len_d + K alpha)
std::vector<std::vector<double>> lda_theta(const LdaState& state, double alpha);

TopicSet lda_topics(const LdaState& state, double beta, std::size_t top_n);

}  // namespace topiceval
