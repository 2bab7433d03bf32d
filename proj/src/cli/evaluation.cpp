#include "topiceval/cli/evaluation.hpp"

#include "topiceval/error.hpp"

namespace topiceval::cli {

DiversityKind parse_diversity(std::string_view name) {
  if (name == "unique") return DiversityKind::unique;
  if (name == "jsd") return DiversityKind::jsd;
  if (name == "hellinger") return DiversityKind::hellinger;
  if (name == "cosine") return DiversityKind::cosine;
  throw Error(ErrorCode::InvalidArgument, "unknown diversity '" + std::string(name) + "'");
}

std::string to_string(DiversityKind kind) {
  switch (kind) {
    case DiversityKind::unique: return "unique";
    case DiversityKind::jsd: return "jsd";
    case DiversityKind::hellinger: return "hellinger";
    case DiversityKind::cosine: return "cosine";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  if (name == "umass") return Measure::umass;
  if (name == "c_npmi" || name == "npmi") return Measure::npmi;
  if (name == "c_v") return Measure::c_v;
  throw Error(ErrorCode::InvalidArgument, "unknown coherence measure '" + std::string(name) + "'");
}

std::string measure_name(Measure measure) {
  switch (measure) {
    case Measure::umass: return "umass";
    case Measure::npmi: return "c_npmi";
    case Measure::c_v: return "c_v";
  }
  return "?";
}

double topic_diversity(const TopicSet& topics, DiversityKind kind, std::size_t top_n) {
  switch (kind) {
    case DiversityKind::unique: return unique_word_diversity(topics.word_lists(top_n), top_n);
    case DiversityKind::jsd: return avg_pairwise_divergence(topics.distributions(), DivergenceMeasure::jsd).average;
    case DiversityKind::hellinger:
      return avg_pairwise_divergence(topics.distributions(), DivergenceMeasure::hellinger).average;
    case DiversityKind::cosine:
      return avg_pairwise_divergence(topics.distributions(), DivergenceMeasure::cosine).average;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown diversity");
}

EvalScores evaluate_topics(const Corpus& corpus, const TopicSet& topics, const EvalSettings& settings) {
  if (topics.size() == 0) throw Error(ErrorCode::TooFewTopics, "no topics to evaluate");
  EvalScores s;
  s.k = topics.size();
  s.per_topic = score_topics(corpus, topics.ranked(settings.coherence.top_n), settings.coherence);
  s.coherence = aggregate_mean(s.per_topic);
  s.diversity = topic_diversity(topics, settings.diversity, settings.coherence.top_n);
  return s;
}

}  // namespace topiceval::cli
