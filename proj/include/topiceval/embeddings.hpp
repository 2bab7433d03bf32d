#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace topiceval {

/// Dense n_docs x dim matrix, row-major, aligned with doc_ids.
struct EmbeddingMatrix {
  std::size_t n_docs = 0;
  std::size_t dim = 0;
  std::vector<double> data;
  std::vector<std::string> doc_ids;

  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * dim, dim}; }
  double at(std::size_t i, std::size_t j) const { return data[i * dim + j]; }

  /// Throws InvalidArgument / NonFiniteValue when shape or values are invalid.
  void validate() const;
};

// EMB1 layout (little-endian):
//   "EMB1" | u32 version=1 | u64 n_docs | u32 dim | u8 dtype=1 (f32) | 3 zero bytes
//   n_docs * dim f32 row-major | u32 CRC-32 of the float bytes
inline constexpr std::uint32_t kEmbVersion = 1;
inline constexpr std::uint8_t kEmbDtypeF32 = 1;
inline constexpr std::size_t kEmbHeaderSize = 24;

/// Sidecar doc-id file: JSON lines, record i = {"id": "..."} for row i.
std::filesystem::path sidecar_path(const std::filesystem::path& emb_path);

/// Reads an EMB1 file and its sidecar (row indices become ids when the
/// sidecar is absent). Throws BadMagic, BadHeader, TruncatedFile,
/// ChecksumMismatch, NonFiniteValue, EmptyEmbeddings, UnreadableInput.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

/// Writes EMB1 (values narrowed to f32) plus the sidecar.
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix);

/// CRC-32 (IEEE) of a byte range.
std::uint32_t crc32_of(std::span<const std::byte> bytes);

}  // namespace topiceval
