#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace topiceval {

using TokenId = std::uint32_t;

/// The pinned English stopword list compiled from data/stopwords_en.txt.
const std::unordered_set<std::string>& english_stopwords();

struct TokenizerConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  std::size_t min_token_len = 2;
  std::size_t max_token_len = 15;
  bool alphabetic_only = true;
  std::unordered_set<std::string> stopwords = english_stopwords();

  /// Throws InvalidArgument unless 1 <= min_token_len <= max_token_len.
  void validate() const;
};

/// NFC-normalizes `raw` and splits it into tokens. Lengths are counted in code
/// points; stopwords are matched against the lowercased token.
std::vector<std::string> tokenize(std::string_view raw, const TokenizerConfig& cfg);

/// Token <-> id map. Ids are assigned in byte-wise sorted token order, so a
/// vocabulary depends only on the set of documents, never on thread count.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Rebuilds a vocabulary from serialized parts. `tokens` must be strictly
  /// increasing; throws BadHeader otherwise.
  static Vocabulary from_parts(std::vector<std::string> tokens, std::vector<std::uint64_t> doc_freq,
                               std::uint64_t n_docs);

  std::size_t size() const noexcept { return tokens_.size(); }
  std::uint64_t n_docs() const noexcept { return n_docs_; }
  std::optional<TokenId> id_of(std::string_view token) const;
  const std::string& token_of(TokenId id) const;
  std::uint64_t doc_freq(TokenId id) const;

  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::span<const std::uint64_t> doc_freqs() const noexcept { return doc_freq_; }

 private:
  friend Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs);
  friend Vocabulary build_vocabulary_serial(std::span<const std::vector<std::string>> docs);

  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> doc_freq_;
  std::uint64_t n_docs_ = 0;
};

/// Throws EmptyCorpus when `docs` is empty.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs);
/// Single-threaded reference for build_vocabulary.
Vocabulary build_vocabulary_serial(std::span<const std::vector<std::string>> docs);

struct BowEntry {
  TokenId id;
  std::uint32_t count;

  friend bool operator==(const BowEntry&, const BowEntry&) = default;
};

using SparseDoc = std::vector<BowEntry>;

/// Sorted by id; out-of-vocabulary tokens are dropped.
SparseDoc doc2bow(std::span<const std::string> tokens, const Vocabulary& vocab);

struct BowCorpus {
  std::shared_ptr<const Vocabulary> vocab;
  std::vector<SparseDoc> docs;
};

struct WeightedEntry {
  TokenId id;
  double weight;
};

using SparseRow = std::vector<WeightedEntry>;

/// weight(d,t) = count(d,t) * ln(n_docs / doc_freq(t)). Throws EmptyCorpus.
std::vector<SparseRow> tfidf(const BowCorpus& corpus);

/// A preprocessed corpus: document ids, token-id sequences (for sliding
/// windows) and the bag-of-words view over one shared vocabulary.
struct Corpus {
  std::vector<std::string> doc_ids;
  std::vector<std::vector<TokenId>> sequences;
  BowCorpus bow;

  std::size_t size() const noexcept { return doc_ids.size(); }
  const Vocabulary& vocab() const { return *bow.vocab; }
};

struct RawDocument {
  std::string id;
  std::string text;
};

/// Tokenizes every document (in parallel), builds the vocabulary and both
/// corpus views. Throws EmptyCorpus when `docs` is empty.
Corpus build_corpus(std::span<const RawDocument> docs, const TokenizerConfig& cfg);

/// Rebuilds sequences/bow for token lists over an existing vocabulary.
Corpus corpus_from_tokens(std::vector<std::string> doc_ids,
                          std::span<const std::vector<std::string>> tokens,
                          std::shared_ptr<const Vocabulary> vocab);

}  // namespace topiceval
