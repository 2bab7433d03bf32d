#include "topiceval/lda.hpp"

#include <algorithm>
#include <random>

#include "topiceval/error.hpp"

namespace topiceval {

namespace {

// Portable uniform draw in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void LdaConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "LDA needs k >= 1");
  if (!(effective_alpha() > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha and beta must be > 0");
  }
  if (sweeps < 1) throw Error(ErrorCode::InvalidArgument, "sweeps must be >= 1");
}

bool LdaState::counts_consistent() const {
  std::vector<std::uint64_t> dk(n_docs() * k, 0);
  std::vector<std::uint64_t> kw(k * vocab_size, 0);
  std::vector<std::uint64_t> kt(k, 0);
  for (std::size_t d = 0; d < n_docs(); ++d) {
    if (z[d].size() != tokens[d].size()) return false;
    for (std::size_t i = 0; i < tokens[d].size(); ++i) {
      const auto t = z[d][i];
      if (t >= k) return false;
      ++dk[d * k + t];
      ++kw[t * vocab_size + tokens[d][i]];
      ++kt[t];
    }
  }
  return dk == n_dk && kw == n_kw && kt == n_k;
}

LdaState lda_fit(const BowCorpus& corpus, const LdaConfig& cfg, const SweepCallback& on_sweep) {
  cfg.validate();
  if (corpus.docs.empty() || !corpus.vocab) throw Error(ErrorCode::EmptyCorpus, "LDA on an empty corpus");

  LdaState s;
  s.k = cfg.k;
  s.vocab_size = corpus.vocab->size();
  const std::size_t K = cfg.k;
  const std::size_t V = s.vocab_size;
  s.tokens.resize(corpus.docs.size());
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    for (const auto& e : corpus.docs[d]) s.tokens[d].insert(s.tokens[d].end(), e.count, e.id);
    if (s.tokens[d].empty()) {
      throw Error(ErrorCode::EmptyDocument, "document " + std::to_string(d) + " has no tokens");
    }
  }
  s.n_dk.assign(s.n_docs() * K, 0);
  s.n_kw.assign(K * V, 0);
  s.n_k.assign(K, 0);

  std::mt19937_64 rng(cfg.seed);
  s.z.resize(s.n_docs());
  for (std::size_t d = 0; d < s.n_docs(); ++d) {
    s.z[d].resize(s.tokens[d].size());
    for (std::size_t i = 0; i < s.tokens[d].size(); ++i) {
      const auto t = static_cast<std::uint32_t>(uniform01(rng) * static_cast<double>(K));
      s.z[d][i] = t;
      ++s.n_dk[d * K + t];
      ++s.n_kw[t * V + s.tokens[d][i]];
      ++s.n_k[t];
    }
  }

  const double alpha = cfg.effective_alpha();
  const double beta = cfg.beta;
  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> cdf(K);
  for (std::size_t sweep = 0; sweep < cfg.sweeps; ++sweep) {
    for (std::size_t d = 0; d < s.n_docs(); ++d) {
      auto* dk = &s.n_dk[d * K];
      for (std::size_t i = 0; i < s.tokens[d].size(); ++i) {
        const TokenId w = s.tokens[d][i];
        const auto old = s.z[d][i];
        --dk[old];
        --s.n_kw[old * V + w];
        --s.n_k[old];

        double total = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          total += (static_cast<double>(dk[t]) + alpha) * (static_cast<double>(s.n_kw[t * V + w]) + beta) /
                   (static_cast<double>(s.n_k[t]) + v_beta);
          cdf[t] = total;
        }
        const double u = uniform01(rng) * total;
        std::uint32_t pick = 0;
        while (pick + 1 < K && cdf[pick] <= u) ++pick;

        s.z[d][i] = pick;
        ++dk[pick];
        ++s.n_kw[pick * V + w];
        ++s.n_k[pick];
      }
    }
    if (on_sweep) on_sweep(sweep, s);
  }
  return s;
}

std::vector<TopicWordDist> lda_phi(const LdaState& state, double beta) {
  const std::size_t V = state.vocab_size;
  const double v_beta = static_cast<double>(V) * beta;
  std::vector<TopicWordDist> out;
  out.reserve(state.k);
  for (std::size_t t = 0; t < state.k; ++t) {
    std::vector<double> row(V);
    const double denom = static_cast<double>(state.n_k[t]) + v_beta;
    for (std::size_t w = 0; w < V; ++w) row[w] = (static_cast<double>(state.n_kw[t * V + w]) + beta) / denom;
    out.emplace_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<double>> lda_theta(const LdaState& state, double alpha) {
  const std::size_t K = state.k;
  std::vector<std::vector<double>> out(state.n_docs(), std::vector<double>(K));
  for (std::size_t d = 0; d < state.n_docs(); ++d) {
    const double denom = static_cast<double>(state.tokens[d].size()) + static_cast<double>(K) * alpha;
    for (std::size_t t = 0; t < K; ++t) out[d][t] = (static_cast<double>(state.n_dk[d * K + t]) + alpha) / denom;
  }
  return out;
}

TopicSet lda_topics(const LdaState& state, double beta, std::size_t top_n) {
  TopicSet set;
  auto phi = lda_phi(state, beta);
  for (std::size_t t = 0; t < phi.size(); ++t) {
    TopicEntry e;
    e.label = static_cast<int>(t);
    e.words = topic_top_words(phi[t].probs(), std::min(top_n, state.vocab_size)).words;
    for (const auto w : e.words) e.weights.push_back(phi[t].probs()[w]);
    e.distribution = std::move(phi[t]);
    set.topics.push_back(std::move(e));
  }
  return set;
}

}  // namespace topiceval
