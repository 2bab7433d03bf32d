#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "topiceval/textprep.hpp"

namespace topiceval {

/// A topic-word distribution phi_k over vocabulary ids.
class TopicWordDist {
 public:
  /// Throws InvalidDistribution unless entries are finite, >= 0 and sum to 1
  /// within 1e-9.
  explicit TopicWordDist(std::vector<double> probs);

  /// Normalizes non-negative weights to sum 1. Throws ZeroVector for an
  /// all-zero input and NegativeInput for negative entries.
  static TopicWordDist from_weights(std::span<const double> weights);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

enum class DivergenceMeasure { jsd, hellinger, cosine };

/// sum p_i log2(p_i / q_i). Throws InfiniteDivergence when q_i == 0 < p_i.
double kl(std::span<const double> p, std::span<const double> q);
/// Jensen-Shannon divergence with base-2 logs, in [0, 1].
double jsd(std::span<const double> p, std::span<const double> q);
/// (1/sqrt 2) * || sqrt p - sqrt q ||_2, in [0, 1].
double hellinger(std::span<const double> p, std::span<const double> q);
/// 1 - cos(p, q). Throws ZeroVector.
double cosine_distance(std::span<const double> p, std::span<const double> q);

double divergence(DivergenceMeasure measure, std::span<const double> p, std::span<const double> q);

struct DivergenceReport {
  DivergenceMeasure measure;
  std::size_t k = 0;
  std::vector<double> pairwise;  // k x k, row-major, symmetric, zero diagonal
  double average = 0.0;          // mean of the strict upper triangle

  double at(std::size_t i, std::size_t j) const { return pairwise[i * k + j]; }
};

/// Average pairwise divergence over K >= 2 topics. Throws TooFewTopics.
DivergenceReport avg_pairwise_divergence(std::span<const TopicWordDist> topics, DivergenceMeasure measure);

/// |distinct words over all top-n lists| / (K * n). Throws TopicTooSmall if a
/// topic has fewer than n words, TooFewTopics if there are none.
double unique_word_diversity(std::span<const std::vector<TokenId>> topics, std::size_t n);

namespace serial {
DivergenceReport avg_pairwise_divergence(std::span<const TopicWordDist> topics, DivergenceMeasure measure);
}

}  // namespace topiceval
