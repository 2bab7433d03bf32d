#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "topiceval/textprep.hpp"

namespace topiceval {

enum class EstimationMode { document, window };

/// Window size meaning "the whole document".
inline constexpr std::size_t kWholeDocument = std::numeric_limits<std::size_t>::max();

/// Occurrence and joint-occurrence counts of a fixed word set over virtual
/// documents (whole documents or sliding windows). Immutable once built.
class CooccurrenceStats {
 public:
  /// `words` must be sorted and unique; `occur` is aligned with it and
  /// `joint` is the packed strict upper triangle (i < j) in row-major order.
  CooccurrenceStats(EstimationMode mode, std::size_t window_size, std::size_t window_step,
                    std::vector<TokenId> words, std::uint64_t n_virtual, std::vector<std::uint64_t> occur,
                    std::vector<std::uint64_t> joint);

  EstimationMode mode() const noexcept { return mode_; }
  std::size_t window_size() const noexcept { return window_size_; }
  std::size_t window_step() const noexcept { return window_step_; }
  std::uint64_t n_virtual() const noexcept { return n_virtual_; }
  std::span<const TokenId> word_set() const noexcept { return words_; }

  bool contains(TokenId w) const noexcept;
  /// Virtual documents containing `w`. Throws UnknownWord outside the word set.
  std::uint64_t occur(TokenId w) const;
  /// Virtual documents containing both words; joint(w, w) == occur(w).
  std::uint64_t joint(TokenId a, TokenId b) const;
  double prob(TokenId w) const;
  double joint_prob(TokenId a, TokenId b) const;

  std::span<const std::uint64_t> occur_counts() const noexcept { return occur_; }
  std::span<const std::uint64_t> joint_counts() const noexcept { return joint_; }

  friend bool operator==(const CooccurrenceStats&, const CooccurrenceStats&) = default;

 private:
  std::size_t position(TokenId w) const;

  EstimationMode mode_;
  std::size_t window_size_;
  std::size_t window_step_;
  std::vector<TokenId> words_;
  std::uint64_t n_virtual_;
  std::vector<std::uint64_t> occur_;
  std::vector<std::uint64_t> joint_;
};

/// Number of virtual documents a document of `len` tokens contributes.
std::uint64_t window_count(std::size_t len, std::size_t size, std::size_t step) noexcept;

/// Boolean per-document counts over a bag-of-words corpus. Throws EmptyWordSet.
CooccurrenceStats count_document_stats(const BowCorpus& corpus, std::span<const TokenId> words);

/// Counts over every exact-size window at stride `step`; documents shorter
/// than `size` contribute one whole-document window. Windows never span
/// documents. Throws EmptyWordSet, InvalidArgument (size or step of 0).
CooccurrenceStats count_window_stats(std::span<const std::vector<TokenId>> docs, std::span<const TokenId> words,
                                     std::size_t size, std::size_t step = 1);

namespace serial {

// Straightforward single-threaded references. They build an explicit set per
// virtual document and must agree with the parallel kernels bit for bit.
CooccurrenceStats count_document_stats(const BowCorpus& corpus, std::span<const TokenId> words);
CooccurrenceStats count_window_stats(std::span<const std::vector<TokenId>> docs, std::span<const TokenId> words,
                                     std::size_t size, std::size_t step = 1);

}  // namespace serial

}  // namespace topiceval
