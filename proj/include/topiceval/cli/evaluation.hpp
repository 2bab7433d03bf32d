#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "topiceval/coherence.hpp"
#include "topiceval/divergence.hpp"
#include "topiceval/topics.hpp"

namespace topiceval::cli {

enum class DiversityKind { unique, jsd, hellinger, cosine };

DiversityKind parse_diversity(std::string_view name);
std::string to_string(DiversityKind kind);
/// "umass", "c_npmi" (or "npmi") and "c_v". Throws InvalidArgument.
Measure parse_measure(std::string_view name);
std::string measure_name(Measure measure);

struct EvalSettings {
  CoherenceConfig coherence;
  DiversityKind diversity = DiversityKind::unique;
};

struct EvalScores {
  std::vector<double> per_topic;
  double coherence = 0.0;
  double diversity = 0.0;
  std::size_t k = 0;
};

/// Mean coherence over topics (truncated to top_n) and the chosen diversity.
EvalScores evaluate_topics(const Corpus& corpus, const TopicSet& topics, const EvalSettings& settings);

double topic_diversity(const TopicSet& topics, DiversityKind kind, std::size_t top_n);

}  // namespace topiceval::cli
