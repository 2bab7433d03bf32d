#pragma once

#include <filesystem>

#include "topiceval/textprep.hpp"

namespace topiceval::cli {

// Corpus archive: one JSON header line (tokenizer settings, vocabulary,
// document frequencies, doc ids, payload size and CRC-32), then a binary
// little-endian payload. Per document: u32 length, length u32 token ids,
// u32 nnz, nnz (u32 id, u32 count) pairs.
inline constexpr const char* kArchiveFormat = "topiceval-corpus";
inline constexpr int kArchiveVersion = 1;

void write_corpus_archive(const std::filesystem::path& path, const Corpus& corpus, const TokenizerConfig& cfg);

/// Throws UnreadableInput, BadHeader, TruncatedFile, ChecksumMismatch.
Corpus read_corpus_archive(const std::filesystem::path& path);

}  // namespace topiceval::cli
