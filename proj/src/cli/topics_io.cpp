#include "topiceval/cli/topics_io.hpp"

#include <fstream>

#include "topiceval/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace topiceval::cli {

json topics_to_json(const TopicSet& topics, const Vocabulary& vocab, json meta) {
  json out = meta.is_object() ? std::move(meta) : json::object();
  out["vocab_size"] = vocab.size();
  json arr = json::array();
  for (const auto& t : topics.topics) {
    json entry;
    entry["label"] = t.label;
    std::vector<std::string> words;
    words.reserve(t.words.size());
    for (const auto id : t.words) words.push_back(vocab.token_of(id));
    entry["words"] = words;
    entry["weights"] = t.weights;
    if (t.distribution) {
      const auto p = t.distribution->probs();
      entry["distribution"] = std::vector<double>(p.begin(), p.end());
    }
    arr.push_back(std::move(entry));
  }
  out["topics"] = std::move(arr);
  return out;
}

void write_topics(const fs::path& path, const TopicSet& topics, const Vocabulary& vocab, json meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableInput, "cannot write " + path.string());
  out << topics_to_json(topics, vocab, std::move(meta)).dump(1) << '\n';
}

namespace {

TokenId lookup(const Vocabulary& vocab, const std::string& word) {
  const auto id = vocab.id_of(word);
  if (!id) throw Error(ErrorCode::WordNotInCorpus, "topic word '" + word + "' is not in the corpus vocabulary");
  return *id;
}

}  // namespace

TopicSet read_topics(const fs::path& path, const Vocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::UnreadableInput, path.string() + ": " + e.what());
  }
  TopicSet set;
  try {
    const auto& arr = j.is_array() ? j : j.at("topics");
    int index = 0;
    for (const auto& t : arr) {
      TopicEntry entry;
      entry.label = index++;
      const json* words = &t;
      if (t.is_object()) {
        words = &t.at("words");
        if (auto it = t.find("label"); it != t.end()) entry.label = it->get<int>();
        if (auto it = t.find("weights"); it != t.end()) entry.weights = it->get<std::vector<double>>();
        if (auto it = t.find("distribution"); it != t.end()) {
          auto p = it->get<std::vector<double>>();
          if (p.size() != vocab.size()) {
            throw Error(ErrorCode::BadHeader, path.string() + ": distribution length " + std::to_string(p.size()) +
                                                  " differs from vocabulary size " + std::to_string(vocab.size()));
          }
          entry.distribution = TopicWordDist(std::move(p));
        }
      }
      for (const auto& w : *words) entry.words.push_back(lookup(vocab, w.get<std::string>()));
      set.topics.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadHeader, path.string() + ": " + e.what());
  }
  return set;
}

}  // namespace topiceval::cli
