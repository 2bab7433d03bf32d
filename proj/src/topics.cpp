#include "topiceval/topics.hpp"

#include <algorithm>
#include <numeric>

#include "topiceval/error.hpp"

namespace topiceval {

std::vector<Topic> TopicSet::ranked(std::size_t n) const {
  std::vector<Topic> out;
  out.reserve(topics.size());
  for (const auto& t : topics) {
    Topic topic;
    topic.words.assign(t.words.begin(), t.words.begin() + static_cast<std::ptrdiff_t>(std::min(n, t.words.size())));
    out.push_back(std::move(topic));
  }
  return out;
}

std::vector<std::vector<TokenId>> TopicSet::word_lists(std::size_t n) const {
  std::vector<std::vector<TokenId>> out;
  for (auto& t : ranked(n)) out.push_back(std::move(t.words));
  return out;
}

std::vector<TopicWordDist> TopicSet::distributions() const {
  std::vector<TopicWordDist> out;
  out.reserve(topics.size());
  for (const auto& t : topics) {
    if (!t.distribution) throw Error(ErrorCode::InvalidArgument, "topic has no word distribution");
    out.push_back(*t.distribution);
  }
  return out;
}

Topic topic_top_words(std::span<const double> weights, std::size_t n) {
  if (n > weights.size()) throw Error(ErrorCode::InvalidArgument, "top-n exceeds the vocabulary size");
  std::vector<TokenId> ids(weights.size());
  std::iota(ids.begin(), ids.end(), TokenId{0});
  const auto by_weight = [&](TokenId a, TokenId b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(), by_weight);
  ids.resize(n);
  return Topic{std::move(ids)};
}

TopicEntry make_topic_entry(int label, std::span<const double> weights, std::size_t n) {
  TopicEntry entry;
  entry.label = label;
  entry.words = topic_top_words(weights, std::min(n, weights.size())).words;
  for (const auto id : entry.words) entry.weights.push_back(weights[id]);
  entry.distribution = TopicWordDist::from_weights(weights);
  return entry;
}

}  // namespace topiceval
