#include <cstring>
#include <fstream>
#include <iterator>

#include <gtest/gtest.h>

#include "support.hpp"
#include "topiceval/embeddings.hpp"
#include "topiceval/error.hpp"

using namespace topiceval;
namespace fs = std::filesystem;

namespace {

EmbeddingMatrix small_matrix() {
  EmbeddingMatrix m;
  m.n_docs = 3;
  m.dim = 2;
  m.data = {0.5, -1.25, 3.0, 0.0, 1e-3f, 7.75};
  m.doc_ids = {"a", "b", "c"};
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

ErrorCode load_error(const fs::path& p) {
  try {
    load_embeddings(p);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "file loaded";
  return ErrorCode::InvalidArgument;
}

// Hand-assembled EMB1 file, independent of write_embeddings.
std::string emb1(std::uint32_t version, std::uint64_t n, std::uint32_t dim, std::uint8_t dtype,
                 const std::vector<float>& values, bool good_crc = true) {
  std::string s = "EMB1";
  const auto put = [&](const void* p, std::size_t len) { s.append(static_cast<const char*>(p), len); };
  put(&version, 4);
  put(&n, 8);
  put(&dim, 4);
  put(&dtype, 1);
  s.append(3, '\0');
  const std::string payload(reinterpret_cast<const char*>(values.data()), values.size() * sizeof(float));
  s += payload;
  std::uint32_t crc = crc32_of(std::as_bytes(std::span(payload.data(), payload.size())));
  if (!good_crc) crc ^= 1u;
  put(&crc, 4);
  return s;
}

}  // namespace

TEST(Emb1, RoundTripIsBitIdentical) {
  const auto dir = testkit::scratch_dir("emb_roundtrip");
  const auto m = small_matrix();
  write_embeddings(dir / "m.emb", m);
  const auto back = load_embeddings(dir / "m.emb");
  EXPECT_EQ(back.n_docs, 3u);
  EXPECT_EQ(back.dim, 2u);
  EXPECT_EQ(back.data, m.data);
  EXPECT_EQ(back.doc_ids, m.doc_ids);
  write_embeddings(dir / "again.emb", back);
  EXPECT_EQ(slurp(dir / "m.emb"), slurp(dir / "again.emb"));
}

TEST(Emb1, LayoutIsExact) {
  const auto dir = testkit::scratch_dir("emb_layout");
  const auto m = small_matrix();
  write_embeddings(dir / "m.emb", m);
  std::vector<float> f(m.data.begin(), m.data.end());
  EXPECT_EQ(slurp(dir / "m.emb"), emb1(1, 3, 2, 1, f));
  EXPECT_EQ(slurp(sidecar_path(dir / "m.emb")), "{\"id\":\"a\"}\n{\"id\":\"b\"}\n{\"id\":\"c\"}\n");
  EXPECT_EQ(sidecar_path(dir / "m.emb").filename(), "m.emb.ids.jsonl");
}

TEST(Emb1, ZeroDocuments) {
  const auto dir = testkit::scratch_dir("emb_zero");
  spit(dir / "z.emb", emb1(1, 0, 4, 1, {}));
  EXPECT_EQ(load_error(dir / "z.emb"), ErrorCode::EmptyEmbeddings);
  EmbeddingMatrix empty;
  empty.dim = 4;
  EXPECT_THROW(write_embeddings(dir / "w.emb", empty), Error);
}

TEST(Emb1, HeaderErrors) {
  const auto dir = testkit::scratch_dir("emb_errors");
  const std::vector<float> v{1, 2, 3, 4};
  auto bad_magic = emb1(1, 2, 2, 1, v);
  bad_magic[3] = '2';
  spit(dir / "magic.emb", bad_magic);
  EXPECT_EQ(load_error(dir / "magic.emb"), ErrorCode::BadMagic);
  spit(dir / "version.emb", emb1(2, 2, 2, 1, v));
  EXPECT_EQ(load_error(dir / "version.emb"), ErrorCode::BadHeader);
  spit(dir / "dtype.emb", emb1(1, 2, 2, 2, v));
  EXPECT_EQ(load_error(dir / "dtype.emb"), ErrorCode::BadHeader);
  auto pad = emb1(1, 2, 2, 1, v);
  pad[22] = 1;
  spit(dir / "pad.emb", pad);
  EXPECT_EQ(load_error(dir / "pad.emb"), ErrorCode::BadHeader);
  spit(dir / "short.emb", emb1(1, 3, 2, 1, v));
  EXPECT_EQ(load_error(dir / "short.emb"), ErrorCode::TruncatedFile);
  spit(dir / "head.emb", emb1(1, 2, 2, 1, v).substr(0, 10));
  EXPECT_EQ(load_error(dir / "head.emb"), ErrorCode::TruncatedFile);
  spit(dir / "crc.emb", emb1(1, 2, 2, 1, v, false));
  EXPECT_EQ(load_error(dir / "crc.emb"), ErrorCode::ChecksumMismatch);
  spit(dir / "nan.emb", emb1(1, 2, 2, 1, {1, std::numeric_limits<float>::quiet_NaN(), 3, 4}));
  EXPECT_EQ(load_error(dir / "nan.emb"), ErrorCode::NonFiniteValue);
  EXPECT_EQ(load_error(dir / "missing.emb"), ErrorCode::UnreadableInput);
}

TEST(Emb1, MissingSidecarUsesRowIndices) {
  const auto dir = testkit::scratch_dir("emb_nosidecar");
  spit(dir / "n.emb", emb1(1, 2, 2, 1, {1, 2, 3, 4}));
  EXPECT_EQ(load_embeddings(dir / "n.emb").doc_ids, (std::vector<std::string>{"0", "1"}));
  spit(sidecar_path(dir / "n.emb"), "{\"id\":\"x\"}\n");
  EXPECT_EQ(load_error(dir / "n.emb"), ErrorCode::MisalignedInputs);
}

TEST(Emb1, ShippedFixtureRowZeroHash) {
  const auto m = load_embeddings(testkit::fixture("20ng_minilm384.emb"));
  ASSERT_EQ(m.n_docs, 2000u);
  ASSERT_EQ(m.dim, 384u);
  EXPECT_EQ(m.doc_ids.front(), "ng-00000");
  EXPECT_EQ(m.doc_ids.back(), "ng-01999");
  std::vector<float> row(m.row(0).begin(), m.row(0).end());
  EXPECT_EQ(crc32_of(std::as_bytes(std::span(row))), 0xe28761cdu);
}

TEST(Crc32, KnownVector) {
  const std::string s = "123456789";
  EXPECT_EQ(crc32_of(std::as_bytes(std::span(s.data(), s.size()))), 0xCBF43926u);
}
