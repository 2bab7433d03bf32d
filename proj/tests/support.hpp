#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topiceval/embeddings.hpp"
#include "topiceval/textprep.hpp"

namespace topiceval::testkit {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(TOPICEVAL_FIXTURE_DIR) / name;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("topiceval_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<RawDocument> load_fixture_docs() {
  std::ifstream in(fixture("20ng_subset.jsonl"));
  std::vector<RawDocument> docs;
  std::string line;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    docs.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>()});
  }
  return docs;
}

/// Corpus whose token id i is the string "w<1000+i>" (fixed width keeps the
/// sorted vocabulary in id order); every id below v is in the vocabulary.
inline Corpus corpus_from_ids(const std::vector<std::vector<TokenId>>& docs, std::size_t v) {
  std::vector<std::string> words(v);
  for (std::size_t w = 0; w < v; ++w) words[w] = "w" + std::to_string(1000 + w);
  std::vector<std::uint64_t> df(v, 0);
  std::vector<std::vector<std::string>> tokens;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<std::string> t;
    std::vector<bool> seen(v, false);
    for (const auto id : docs[i]) {
      t.push_back(words[id]);
      if (!seen[id]) ++df[id];
      seen[id] = true;
    }
    tokens.push_back(std::move(t));
    ids.push_back("d" + std::to_string(i));
  }
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::from_parts(words, df, docs.size()));
  return corpus_from_tokens(ids, tokens, vocab);
}

/// Random corpus: `n_docs` documents of length in [min_len, max_len] over a
/// vocabulary of size v with a skewed word distribution.
inline std::vector<std::vector<TokenId>> random_docs(std::size_t n_docs, std::size_t v, std::size_t min_len,
                                                     std::size_t max_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> w(v);
  for (std::size_t i = 0; i < v; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> word(w.begin(), w.end());
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::vector<std::vector<TokenId>> docs(n_docs);
  for (auto& d : docs) {
    d.resize(len(rng));
    for (auto& t : d) t = static_cast<TokenId>(word(rng));
  }
  return docs;
}

/// Two datasets (the fixture and its first 600 documents) by two encoders
/// (the fixture embeddings and a jittered copy) under `dir`. With
/// `drop_one` the jittered file for the small dataset is never written.
inline std::filesystem::path write_sweep_config(const std::filesystem::path& dir, bool drop_one = false) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto full = load_embeddings(fixture("20ng_minilm384.emb"));
  std::mt19937_64 rng(77);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto jitter = full;
  for (auto& v : jitter.data) v += noise(rng);

  const auto head = [](const EmbeddingMatrix& m, std::size_t n) {
    EmbeddingMatrix h;
    h.n_docs = n;
    h.dim = m.dim;
    h.data.assign(m.data.begin(), m.data.begin() + static_cast<std::ptrdiff_t>(n * m.dim));
    h.doc_ids.assign(m.doc_ids.begin(), m.doc_ids.begin() + static_cast<std::ptrdiff_t>(n));
    return h;
  };
  write_embeddings(dir / "full_a.emb", full);
  write_embeddings(dir / "full_b.emb", jitter);
  write_embeddings(dir / "small_a.emb", head(full, 600));
  if (!drop_one) write_embeddings(dir / "small_b.emb", head(jitter, 600));

  {
    std::ifstream in(fixture("20ng_subset.jsonl"));
    std::ofstream small(dir / "small.jsonl", std::ios::binary);
    std::string line;
    for (int i = 0; i < 600 && std::getline(in, line); ++i) small << line << "\n";
  }

  const auto cfg = dir / "sweep.toml";
  std::ofstream out(cfg, std::ios::binary);
  out << "[sweep]\noutput_dir = \"out\"\nworkers = 2\nseed = 42\n\n"
      << "[encoders.enc-a]\nparams = 22000000\n\n[encoders.enc-b]\nparams = 110000000\n\n"
      << "[datasets.full]\npath = \"" << fixture("20ng_subset.jsonl").generic_string() << "\"\n\n"
      << "[datasets.full.embeddings]\nenc-a = \"full_a.emb\"\nenc-b = \"full_b.emb\"\n\n"
      << "[datasets.small]\npath = \"small.jsonl\"\n\n"
      << "[datasets.small.embeddings]\nenc-a = \"small_a.emb\"\nenc-b = \"small_b.emb\"\n";
  return cfg;
}

}  // namespace topiceval::testkit
