#include "topiceval/embeddings.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "topiceval/error.hpp"

namespace topiceval {

static_assert(std::endian::native == std::endian::little, "EMB1 I/O assumes a little-endian host");

namespace {

template <typename T>
T read_le(const std::vector<char>& buf, std::size_t offset) {
  T value;
  std::memcpy(&value, buf.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

std::vector<std::string> load_sidecar(const std::filesystem::path& path, std::size_t n_docs) {
  std::vector<std::string> ids;
  std::ifstream in(path);
  if (!in) {
    for (std::size_t i = 0; i < n_docs; ++i) ids.push_back(std::to_string(i));
    return ids;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto& id = j.at("id");
      ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BadHeader, "malformed doc-id sidecar record: " + std::string(e.what()));
    }
  }
  if (ids.size() != n_docs) {
    throw Error(ErrorCode::MisalignedInputs, "sidecar has " + std::to_string(ids.size()) + " ids for " +
                                                 std::to_string(n_docs) + " embedding rows");
  }
  return ids;
}

}  // namespace

void EmbeddingMatrix::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "embedding dim must be >= 1");
  if (data.size() != n_docs * dim) throw Error(ErrorCode::InvalidArgument, "embedding data size mismatch");
  if (doc_ids.size() != n_docs) throw Error(ErrorCode::MisalignedInputs, "doc_ids size differs from n_docs");
  for (const auto v : data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "embedding contains a non-finite value");
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& emb_path) {
  auto p = emb_path;
  p += ".ids.jsonl";
  return p;
}

std::uint32_t crc32_of(std::span<const std::byte> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + offset), chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open embedding file " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < 4 || std::memcmp(buf.data(), "EMB1", 4) != 0) {
    throw Error(ErrorCode::BadMagic, path.string() + " is not an EMB1 file");
  }
  if (buf.size() < kEmbHeaderSize) throw Error(ErrorCode::TruncatedFile, "EMB1 header is truncated");
  const auto version = read_le<std::uint32_t>(buf, 4);
  const auto n_docs = read_le<std::uint64_t>(buf, 8);
  const auto dim = read_le<std::uint32_t>(buf, 16);
  const auto dtype = static_cast<std::uint8_t>(buf[20]);
  if (version != kEmbVersion) throw Error(ErrorCode::BadHeader, "unsupported EMB1 version " + std::to_string(version));
  if (dtype != kEmbDtypeF32) throw Error(ErrorCode::BadHeader, "unsupported EMB1 dtype " + std::to_string(dtype));
  if (buf[21] != 0 || buf[22] != 0 || buf[23] != 0) throw Error(ErrorCode::BadHeader, "EMB1 pad bytes must be zero");
  if (n_docs == 0) throw Error(ErrorCode::EmptyEmbeddings, "EMB1 file declares zero documents");
  if (dim == 0) throw Error(ErrorCode::BadHeader, "EMB1 dim must be >= 1");

  const std::size_t remaining = buf.size() - kEmbHeaderSize;
  if (n_docs > remaining / (static_cast<std::size_t>(dim) * sizeof(float))) {
    throw Error(ErrorCode::TruncatedFile, "EMB1 payload is shorter than n_docs * dim floats");
  }
  const std::size_t payload = static_cast<std::size_t>(n_docs) * dim * sizeof(float);
  if (remaining < payload + sizeof(std::uint32_t)) throw Error(ErrorCode::TruncatedFile, "EMB1 checksum is missing");
  if (remaining > payload + sizeof(std::uint32_t)) throw Error(ErrorCode::BadHeader, "trailing bytes after EMB1 checksum");

  const auto* payload_ptr = reinterpret_cast<const std::byte*>(buf.data() + kEmbHeaderSize);
  const auto stored_crc = read_le<std::uint32_t>(buf, kEmbHeaderSize + payload);
  if (crc32_of({payload_ptr, payload}) != stored_crc) {
    throw Error(ErrorCode::ChecksumMismatch, "EMB1 payload checksum does not match");
  }

  EmbeddingMatrix m;
  m.n_docs = static_cast<std::size_t>(n_docs);
  m.dim = dim;
  m.data.resize(m.n_docs * m.dim);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    const auto v = read_le<float>(buf, kEmbHeaderSize + i * sizeof(float));
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, "non-finite value at row " + std::to_string(i / m.dim));
    }
    m.data[i] = v;
  }
  m.doc_ids = load_sidecar(sidecar_path(path), m.n_docs);
  return m;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix) {
  matrix.validate();
  if (matrix.n_docs == 0) throw Error(ErrorCode::EmptyEmbeddings, "refusing to write zero documents");
  std::vector<float> values(matrix.data.begin(), matrix.data.end());
  const std::span<const std::byte> bytes = std::as_bytes(std::span<const float>(values));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableInput, "cannot write " + path.string());
  out.write("EMB1", 4);
  write_le<std::uint32_t>(out, kEmbVersion);
  write_le<std::uint64_t>(out, matrix.n_docs);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.dim));
  const char tail[4] = {static_cast<char>(kEmbDtypeF32), 0, 0, 0};
  out.write(tail, 4);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  write_le<std::uint32_t>(out, crc32_of(bytes));

  std::ofstream ids(sidecar_path(path), std::ios::trunc);
  for (const auto& id : matrix.doc_ids) ids << nlohmann::json{{"id", id}}.dump() << '\n';
}

}  // namespace topiceval
