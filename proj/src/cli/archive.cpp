#include "topiceval/cli/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "topiceval/embeddings.hpp"
#include "topiceval/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace topiceval::cli {

static_assert(std::endian::native == std::endian::little, "archive I/O assumes a little-endian host");

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  buf.append(b, 4);
}

class Reader {
 public:
  Reader(const std::string& buf, std::size_t pos) : buf_(buf), pos_(pos) {}

  std::uint32_t u32() {
    if (buf_.size() - pos_ < 4) throw Error(ErrorCode::TruncatedFile, "corpus payload ends early");
    std::uint32_t v;
    std::memcpy(&v, buf_.data() + pos_, 4);
    pos_ += 4;
    return v;
  }
  std::size_t pos() const noexcept { return pos_; }

 private:
  const std::string& buf_;
  std::size_t pos_;
};

}  // namespace

void write_corpus_archive(const fs::path& path, const Corpus& corpus, const TokenizerConfig& cfg) {
  const auto& vocab = corpus.vocab();
  std::string payload;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& seq = corpus.sequences[d];
    put_u32(payload, static_cast<std::uint32_t>(seq.size()));
    for (const auto id : seq) put_u32(payload, id);
    const auto& bow = corpus.bow.docs[d];
    put_u32(payload, static_cast<std::uint32_t>(bow.size()));
    for (const auto& e : bow) {
      put_u32(payload, e.id);
      put_u32(payload, e.count);
    }
  }
  json header = {
      {"format", kArchiveFormat},
      {"version", kArchiveVersion},
      {"n_docs", corpus.size()},
      {"vocab_size", vocab.size()},
      {"tokenizer",
       {{"lowercase", cfg.lowercase},
        {"strip_punctuation", cfg.strip_punctuation},
        {"min_token_len", cfg.min_token_len},
        {"max_token_len", cfg.max_token_len},
        {"alphabetic_only", cfg.alphabetic_only},
        {"n_stopwords", cfg.stopwords.size()}}},
      {"vocab", std::vector<std::string>(vocab.tokens().begin(), vocab.tokens().end())},
      {"doc_freq", std::vector<std::uint64_t>(vocab.doc_freqs().begin(), vocab.doc_freqs().end())},
      {"doc_ids", corpus.doc_ids},
      {"payload_bytes", payload.size()},
      {"payload_crc32", crc32_of(std::as_bytes(std::span(payload.data(), payload.size())))},
  };
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::UnreadableInput, "cannot write " + path.string());
    out << header.dump() << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw Error(ErrorCode::UnreadableInput, "write failed for " + path.string());
  }
  fs::rename(tmp, path);
}

Corpus read_corpus_archive(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + path.string());
  const std::string buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto nl = buf.find('\n');
  if (nl == std::string::npos) throw Error(ErrorCode::BadHeader, path.string() + " has no archive header");
  json header;
  try {
    header = json::parse(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(nl));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadHeader, path.string() + ": " + e.what());
  }
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> doc_freq;
  std::vector<std::string> doc_ids;
  std::size_t payload_bytes = 0;
  std::uint32_t crc = 0;
  try {
    if (header.at("format") != kArchiveFormat || header.at("version") != kArchiveVersion) {
      throw Error(ErrorCode::BadHeader, path.string() + " is not a version 1 corpus archive");
    }
    tokens = header.at("vocab").get<std::vector<std::string>>();
    doc_freq = header.at("doc_freq").get<std::vector<std::uint64_t>>();
    doc_ids = header.at("doc_ids").get<std::vector<std::string>>();
    payload_bytes = header.at("payload_bytes").get<std::size_t>();
    crc = header.at("payload_crc32").get<std::uint32_t>();
    if (header.at("n_docs").get<std::size_t>() != doc_ids.size() ||
        header.at("vocab_size").get<std::size_t>() != tokens.size() || doc_freq.size() != tokens.size()) {
      throw Error(ErrorCode::BadHeader, path.string() + " header sizes disagree");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadHeader, path.string() + ": " + e.what());
  }
  const std::size_t start = nl + 1;
  if (buf.size() - start < payload_bytes) throw Error(ErrorCode::TruncatedFile, path.string() + " payload is truncated");
  if (buf.size() - start > payload_bytes) throw Error(ErrorCode::BadHeader, path.string() + " has trailing bytes");
  if (crc32_of(std::as_bytes(std::span(buf.data() + start, payload_bytes))) != crc) {
    throw Error(ErrorCode::ChecksumMismatch, path.string() + " payload checksum mismatch");
  }

  Corpus corpus;
  const auto n_docs = doc_ids.size();
  auto vocab = Vocabulary::from_parts(std::move(tokens), std::move(doc_freq), n_docs);
  const auto v = vocab.size();
  corpus.doc_ids = std::move(doc_ids);
  corpus.sequences.resize(n_docs);
  corpus.bow.docs.resize(n_docs);
  Reader r(buf, start);
  for (std::size_t d = 0; d < n_docs; ++d) {
    auto& seq = corpus.sequences[d];
    seq.resize(r.u32());
    for (auto& id : seq) {
      id = r.u32();
      if (id >= v) throw Error(ErrorCode::BadHeader, "token id out of range in " + path.string());
    }
    auto& bow = corpus.bow.docs[d];
    bow.resize(r.u32());
    for (auto& e : bow) {
      e.id = r.u32();
      e.count = r.u32();
      if (e.id >= v) throw Error(ErrorCode::BadHeader, "token id out of range in " + path.string());
    }
  }
  corpus.bow.vocab = std::make_shared<const Vocabulary>(std::move(vocab));
  return corpus;
}

}  // namespace topiceval::cli
