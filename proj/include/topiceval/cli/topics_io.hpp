#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "topiceval/textprep.hpp"
#include "topiceval/topics.hpp"

namespace topiceval::cli {

// Topics file (JSON):
//   {"model": "...", "vocab_size": V, "topics": [
//     {"label": 0, "words": ["..."], "weights": [...], "distribution": [... V values]}]}
// Only "words" is required; a topic may also be given as a bare word array.

nlohmann::json topics_to_json(const TopicSet& topics, const Vocabulary& vocab, nlohmann::json meta = {});
void write_topics(const std::filesystem::path& path, const TopicSet& topics, const Vocabulary& vocab,
                  nlohmann::json meta = {});

/// Maps words back to ids. Throws UnreadableInput, BadHeader,
/// WordNotInCorpus (word absent from the vocabulary).
TopicSet read_topics(const std::filesystem::path& path, const Vocabulary& vocab);

}  // namespace topiceval::cli
