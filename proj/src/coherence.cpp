#include "topiceval/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "topiceval/error.hpp"

namespace topiceval {

namespace {

void require_pairs(const Topic& topic) {
  if (topic.size() < 2) throw Error(ErrorCode::TopicTooSmall, "a topic needs at least two words");
}

Topic truncated(const Topic& topic, std::size_t n) {
  Topic t;
  t.words.assign(topic.words.begin(), topic.words.begin() + static_cast<std::ptrdiff_t>(std::min(n, topic.size())));
  return t;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "C_v confirmation vector has zero norm");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

Segmentation segment_one_set(const Topic& topic) {
  require_pairs(topic);
  Segmentation s;
  s.pairs.reserve(topic.size());
  for (std::size_t i = 0; i < topic.size(); ++i) {
    SegmentPair p;
    p.antecedent = {topic.words[i]};
    for (std::size_t j = 0; j < topic.size(); ++j) {
      if (j != i) p.conditioning.push_back(topic.words[j]);
    }
    s.pairs.push_back(std::move(p));
  }
  return s;
}

Segmentation segment_pairwise(const Topic& topic) {
  require_pairs(topic);
  Segmentation s;
  s.pairs.reserve(topic.size() * (topic.size() - 1) / 2);
  for (std::size_t i = 0; i < topic.size(); ++i) {
    for (std::size_t j = i + 1; j < topic.size(); ++j) {
      s.pairs.push_back({{topic.words[i]}, {topic.words[j]}});
    }
  }
  return s;
}

std::size_t CoherenceConfig::effective_window() const noexcept {
  if (window_size != 0) return window_size;
  return measure == Measure::npmi ? kNpmiDefaultWindow : kCvDefaultWindow;
}

void CoherenceConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  if (window_step == 0) throw Error(ErrorCode::InvalidArgument, "window step must be >= 1");
  if (top_n < 2) throw Error(ErrorCode::TopicTooSmall, "top_n must be >= 2");
}

double npmi(TokenId p, TokenId q, const CooccurrenceStats& stats) {
  const auto joint = stats.joint(p, q);
  if (joint == 0) return -1.0;
  const auto n = static_cast<double>(stats.n_virtual());
  if (static_cast<double>(joint) == n) return 1.0;
  const auto occ_p = static_cast<double>(stats.occur(p));
  const auto occ_q = static_cast<double>(stats.occur(q));
  const double j = static_cast<double>(joint);
  // ln(P(pq) / (P(p) P(q))) written over counts keeps the ratio exact for
  // moderate corpus sizes.
  const double pmi = std::log((j * n) / (occ_p * occ_q));
  const double value = pmi / -std::log(j / n);
  return std::clamp(value, -1.0, 1.0);
}

double umass_coherence(const Topic& topic, const CooccurrenceStats& stats, double epsilon) {
  require_pairs(topic);
  if (stats.mode() != EstimationMode::document) {
    throw Error(ErrorCode::WrongEstimationMode, "UMass needs document co-occurrence counts");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  for (const auto w : topic.words) {
    if (stats.occur(w) == 0) {
      throw Error(ErrorCode::WordNotInCorpus, "topic word id " + std::to_string(w) + " occurs in no document");
    }
  }
  double sum = 0.0;
  const std::size_t n = topic.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto wi = topic.words[i];
      const auto wj = topic.words[j];
      sum += std::log((static_cast<double>(stats.joint(wi, wj)) + epsilon) / static_cast<double>(stats.occur(wj)));
    }
  }
  return sum / static_cast<double>(n * (n - 1) / 2);
}

double c_npmi(const Topic& topic, const CooccurrenceStats& stats) {
  const auto segments = segment_pairwise(topic);
  double sum = 0.0;
  for (const auto& pair : segments.pairs) sum += npmi(pair.antecedent.front(), pair.conditioning.front(), stats);
  return sum / static_cast<double>(segments.pairs.size());
}

std::vector<double> npmi_vector(TokenId w, const Topic& topic, const CooccurrenceStats& stats) {
  if (std::find(topic.words.begin(), topic.words.end(), w) == topic.words.end()) {
    throw Error(ErrorCode::UnknownWord, "word is not part of the topic");
  }
  std::vector<double> v(topic.size());
  for (std::size_t j = 0; j < topic.size(); ++j) {
    v[j] = topic.words[j] == w ? 1.0 : npmi(w, topic.words[j], stats);
  }
  return v;
}

double c_v(const Topic& topic, const CooccurrenceStats& stats, CvReference reference) {
  const auto segments = segment_one_set(topic);
  const std::size_t n = topic.size();
  std::vector<std::vector<double>> vectors;
  vectors.reserve(n);
  for (const auto w : topic.words) vectors.push_back(npmi_vector(w, topic, stats));

  double sum = 0.0;
  if (reference == CvReference::mean_of_all) {
    std::vector<double> mean(n, 0.0);
    for (const auto& v : vectors) {
      for (std::size_t j = 0; j < n; ++j) mean[j] += v[j];
    }
    for (auto& m : mean) m /= static_cast<double>(n);
    for (const auto& v : vectors) sum += cosine(v, mean);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> rest(n, 0.0);
      for (const auto w : segments.pairs[i].conditioning) {
        const auto k = static_cast<std::size_t>(std::find(topic.words.begin(), topic.words.end(), w) -
                                                topic.words.begin());
        for (std::size_t j = 0; j < n; ++j) rest[j] += vectors[k][j];
      }
      sum += cosine(vectors[i], rest);
    }
  }
  return sum / static_cast<double>(n);
}

double aggregate_mean(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptyScores, "cannot aggregate zero scores");
  return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

std::vector<TokenId> topic_word_union(std::span<const Topic> topics, std::size_t top_n) {
  std::vector<TokenId> words;
  for (const auto& t : topics) {
    const auto n = std::min(top_n, t.size());
    words.insert(words.end(), t.words.begin(), t.words.begin() + static_cast<std::ptrdiff_t>(n));
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

CooccurrenceStats estimate_probabilities(const Corpus& corpus, std::span<const Topic> topics,
                                         const CoherenceConfig& cfg) {
  cfg.validate();
  const auto words = topic_word_union(topics, cfg.top_n);
  if (cfg.measure == Measure::umass) return count_document_stats(corpus.bow, words);
  return count_window_stats(corpus.sequences, words, cfg.effective_window(), cfg.window_step);
}

double score_topic(const Topic& topic, const CooccurrenceStats& stats, const CoherenceConfig& cfg) {
  const auto t = truncated(topic, cfg.top_n);
  switch (cfg.measure) {
    case Measure::umass: return umass_coherence(t, stats, cfg.epsilon);
    case Measure::npmi: return c_npmi(t, stats);
    case Measure::c_v: return c_v(t, stats, cfg.cv_reference);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown coherence measure");
}

std::vector<double> score_topics(const Corpus& corpus, std::span<const Topic> topics, const CoherenceConfig& cfg) {
  if (topics.empty()) return {};
  const auto stats = estimate_probabilities(corpus, topics, cfg);
  std::vector<double> scores(topics.size());
  const auto n = static_cast<std::int64_t>(topics.size());
  // Exceptions cannot leave an OpenMP region; report the lowest failing topic.
  std::vector<std::exception_ptr> failures(topics.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      scores[k] = score_topic(topics[k], stats, cfg);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return scores;
}

}  // namespace topiceval
