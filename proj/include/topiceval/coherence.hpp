#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "topiceval/cooccur.hpp"
#include "topiceval/textprep.hpp"

namespace topiceval {

/// Ranked top-N word ids, highest topic-word weight first.
struct Topic {
  std::vector<TokenId> words;

  std::size_t size() const noexcept { return words.size(); }
};

/// One (W', W*) pair of a segmentation.
struct SegmentPair {
  std::vector<TokenId> antecedent;
  std::vector<TokenId> conditioning;
};

struct Segmentation {
  std::vector<SegmentPair> pairs;
};

/// ({w_i}, T \ {w_i}) for every word. Throws TopicTooSmall when N < 2.
Segmentation segment_one_set(const Topic& topic);
/// ({w_i}, {w_j}) for every i < j by rank. Throws TopicTooSmall when N < 2.
Segmentation segment_pairwise(const Topic& topic);

enum class Measure { umass, npmi, c_v };

/// Reference vector used by C_v.
enum class CvReference {
  mean_of_all,     // v-bar = mean of all N word vectors
  complement_sum,  // sum of the vectors of T \ {w_i}, per one-set segment
};

struct CoherenceConfig {
  Measure measure = Measure::c_v;
  std::size_t window_size = 0;  // 0 selects the measure default (c_v 110, npmi 70)
  std::size_t window_step = 1;
  double epsilon = 1e-12;
  std::size_t top_n = 10;
  CvReference cv_reference = CvReference::mean_of_all;

  std::size_t effective_window() const noexcept;
  void validate() const;
};

inline constexpr std::size_t kCvDefaultWindow = 110;
inline constexpr std::size_t kNpmiDefaultWindow = 70;

/// Normalized PMI in [-1, 1]. A zero joint count gives -1 and P(p,q) == 1
/// gives 1; npmi(w, w) is 1 whenever w occurs.
double npmi(TokenId p, TokenId q, const CooccurrenceStats& stats);

/// Mean over i < j (rank order) of ln((D(w_i,w_j) + eps) / D(w_j)) with
/// document counts. Throws WordNotInCorpus, WrongEstimationMode,
/// TopicTooSmall.
double umass_coherence(const Topic& topic, const CooccurrenceStats& stats, double epsilon = 1e-12);

/// Mean NPMI over all unordered word pairs.
double c_npmi(const Topic& topic, const CooccurrenceStats& stats);

/// Component j is npmi(w, w_j); the self component is 1.
std::vector<double> npmi_vector(TokenId w, const Topic& topic, const CooccurrenceStats& stats);

/// Mean cosine between each word's NPMI vector and the reference vector.
/// Throws ZeroVector when any vector involved has zero norm.
double c_v(const Topic& topic, const CooccurrenceStats& stats, CvReference reference = CvReference::mean_of_all);

/// Throws EmptyScores.
double aggregate_mean(std::span<const double> scores);

/// Distinct word ids over all topics, each truncated to `top_n`.
std::vector<TokenId> topic_word_union(std::span<const Topic> topics, std::size_t top_n);

/// Counts the statistics the configured measure needs (documents for UMass,
/// sliding windows otherwise) over the union of the topics' words.
CooccurrenceStats estimate_probabilities(const Corpus& corpus, std::span<const Topic> topics,
                                         const CoherenceConfig& cfg);

/// Scores one topic (truncated to cfg.top_n) against prebuilt statistics.
double score_topic(const Topic& topic, const CooccurrenceStats& stats, const CoherenceConfig& cfg);

/// Per-topic scores, topics scored in parallel.
std::vector<double> score_topics(const Corpus& corpus, std::span<const Topic> topics, const CoherenceConfig& cfg);

}  // namespace topiceval
