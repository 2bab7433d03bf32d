#include "topiceval/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topiceval/error.hpp"

namespace topiceval {

namespace {

void require_same_size(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::InvalidArgument, "distributions differ in length");
}

// Terms with p_i == 0 contribute nothing (0 log 0 := 0).
double kl_unchecked(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) sum += p[i] * std::log2(p[i] / q[i]);
  }
  return sum;
}

void require_topics(std::span<const TopicWordDist> topics) {
  if (topics.size() < 2) {
    throw Error(ErrorCode::TooFewTopics, "average pairwise divergence needs at least two topics");
  }
  for (const auto& t : topics) {
    if (t.size() != topics.front().size()) {
      throw Error(ErrorCode::InvalidArgument, "topic distributions differ in vocabulary size");
    }
  }
}

double upper_mean(const std::vector<double>& m, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) sum += m[i * k + j];
  }
  return 2.0 * sum / static_cast<double>(k * (k - 1));
}

}  // namespace

TopicWordDist::TopicWordDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorCode::InvalidDistribution, "empty distribution");
  double sum = 0.0;
  for (const auto p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw Error(ErrorCode::InvalidDistribution, "entries must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidDistribution, "entries sum to " + std::to_string(sum) + ", not 1");
  }
}

TopicWordDist TopicWordDist::from_weights(std::span<const double> weights) {
  double sum = 0.0;
  for (const auto w : weights) {
    if (w < 0.0) throw Error(ErrorCode::NegativeInput, "topic weights must be non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::ZeroVector, "topic weights are all zero");
  std::vector<double> probs(weights.begin(), weights.end());
  for (auto& p : probs) p /= sum;
  return TopicWordDist(std::move(probs));
}

double kl(std::span<const double> p, std::span<const double> q) {
  require_same_size(p, q);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] == 0.0) {
      throw Error(ErrorCode::InfiniteDivergence, "q has zero mass where p does not");
    }
  }
  return kl_unchecked(p, q);
}

double jsd(std::span<const double> p, std::span<const double> q) {
  require_same_size(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    const double a = p[i] > 0.0 ? p[i] * std::log2(p[i] / m) : 0.0;
    const double b = q[i] > 0.0 ? q[i] * std::log2(q[i] / m) : 0.0;
    sum += 0.5 * (a + b);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double hellinger(std::span<const double> p, std::span<const double> q) {
  require_same_size(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    sum += d * d;
  }
  return std::clamp(std::sqrt(0.5 * sum), 0.0, 1.0);
}

double cosine_distance(std::span<const double> p, std::span<const double> q) {
  require_same_size(p, q);
  double dot = 0.0;
  double pp = 0.0;
  double qq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * q[i];
    pp += p[i] * p[i];
    qq += q[i] * q[i];
  }
  if (pp == 0.0 || qq == 0.0) throw Error(ErrorCode::ZeroVector, "cosine distance of a zero vector");
  return std::clamp(1.0 - dot / (std::sqrt(pp) * std::sqrt(qq)), 0.0, 2.0);
}

double divergence(DivergenceMeasure measure, std::span<const double> p, std::span<const double> q) {
  switch (measure) {
    case DivergenceMeasure::jsd: return jsd(p, q);
    case DivergenceMeasure::hellinger: return hellinger(p, q);
    case DivergenceMeasure::cosine: return cosine_distance(p, q);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown divergence measure");
}

DivergenceReport avg_pairwise_divergence(std::span<const TopicWordDist> topics, DivergenceMeasure measure) {
  const std::size_t k = topics.size();
  require_topics(topics);
  DivergenceReport report{measure, k, std::vector<double>(k * k, 0.0), 0.0};
  const auto n_pairs = static_cast<std::int64_t>(k * (k - 1) / 2);
  // Each (i, j) is written by exactly one iteration, so the fill is
  // deterministic for any schedule.
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t idx = 0; idx < n_pairs; ++idx) {
    std::size_t i = 0;
    std::size_t rem = static_cast<std::size_t>(idx);
    while (rem >= k - 1 - i) {
      rem -= k - 1 - i;
      ++i;
    }
    const std::size_t j = i + 1 + rem;
    const double d = divergence(measure, topics[i].probs(), topics[j].probs());
    report.pairwise[i * k + j] = d;
    report.pairwise[j * k + i] = d;
  }
  report.average = upper_mean(report.pairwise, k);
  return report;
}

namespace serial {

DivergenceReport avg_pairwise_divergence(std::span<const TopicWordDist> topics, DivergenceMeasure measure) {
  const std::size_t k = topics.size();
  require_topics(topics);
  DivergenceReport report{measure, k, std::vector<double>(k * k, 0.0), 0.0};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = divergence(measure, topics[i].probs(), topics[j].probs());
      report.pairwise[i * k + j] = d;
      report.pairwise[j * k + i] = d;
    }
  }
  report.average = upper_mean(report.pairwise, k);
  return report;
}

}  // namespace serial

double unique_word_diversity(std::span<const std::vector<TokenId>> topics, std::size_t n) {
  if (topics.empty()) throw Error(ErrorCode::TooFewTopics, "diversity of zero topics");
  if (n == 0) throw Error(ErrorCode::TopicTooSmall, "top-n must be >= 1");
  std::vector<TokenId> all;
  all.reserve(topics.size() * n);
  for (const auto& t : topics) {
    if (t.size() < n) {
      throw Error(ErrorCode::TopicTooSmall,
                  "topic has " + std::to_string(t.size()) + " words, fewer than top-n " + std::to_string(n));
    }
    all.insert(all.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n));
  }
  std::sort(all.begin(), all.end());
  const auto distinct = static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
  return static_cast<double>(distinct) / static_cast<double>(topics.size() * n);
}

}  // namespace topiceval
