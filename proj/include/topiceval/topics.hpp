#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "topiceval/coherence.hpp"
#include "topiceval/divergence.hpp"

namespace topiceval {

struct TopicEntry {
  int label = 0;                      // cluster label or topic index
  std::vector<TokenId> words;         // ranked, best first
  std::vector<double> weights;        // aligned with words
  std::optional<TopicWordDist> distribution;
};

struct TopicSet {
  std::vector<TopicEntry> topics;

  std::size_t size() const noexcept { return topics.size(); }
  /// Ranked word lists truncated to n words.
  std::vector<Topic> ranked(std::size_t n) const;
  std::vector<std::vector<TokenId>> word_lists(std::size_t n) const;
  /// Throws InvalidArgument when a topic carries no distribution.
  std::vector<TopicWordDist> distributions() const;
};

/// The n highest-weighted ids, ties broken by ascending id. Throws
/// InvalidArgument when n exceeds the number of weights.
Topic topic_top_words(std::span<const double> weights, std::size_t n);

/// TopicEntry for a weight row: ranked words, their weights and the
/// normalized distribution.
TopicEntry make_topic_entry(int label, std::span<const double> weights, std::size_t n);

}  // namespace topiceval
