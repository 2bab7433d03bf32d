#include "topiceval/textprep.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "topiceval/error.hpp"

namespace topiceval {

namespace detail {
extern const std::string_view kEnglishStopwords;
}

const std::unordered_set<std::string>& english_stopwords() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> out;
    std::string_view rest = detail::kEnglishStopwords;
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) out.emplace(line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
    return out;
  }();
  return words;
}

void TokenizerConfig::validate() const {
  if (min_token_len < 1 || min_token_len > max_token_len) {
    throw Error(ErrorCode::InvalidArgument, "token length window must satisfy 1 <= min <= max");
  }
}

namespace {

bool is_mark(UChar32 c) {
  const auto mask = U_GET_GC_MASK(c);
  return (mask & U_GC_M_MASK) != 0;
}

bool is_letter(UChar32 c) { return u_isUAlphabetic(c) || is_mark(c); }

bool is_word_char(UChar32 c) { return is_letter(c) || u_isdigit(c); }

const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
    return n;
  }();
  return *instance;
}

void emit_token(icu::UnicodeString token, const TokenizerConfig& cfg, std::vector<std::string>& out) {
  if (token.isEmpty()) return;
  icu::UnicodeString folded = token;
  folded.toLower(icu::Locale::getRoot());
  if (cfg.lowercase) token = folded;

  const auto len = static_cast<std::size_t>(token.countChar32());
  if (len < cfg.min_token_len || len > cfg.max_token_len) return;

  if (cfg.alphabetic_only) {
    for (int32_t i = 0; i < token.length();) {
      const UChar32 c = token.char32At(i);
      if (!is_letter(c)) return;
      i += U16_LENGTH(c);
    }
  }

  std::string folded_utf8;
  folded.toUTF8String(folded_utf8);
  if (cfg.stopwords.contains(folded_utf8)) return;

  if (cfg.lowercase) {
    out.push_back(std::move(folded_utf8));
  } else {
    std::string utf8;
    token.toUTF8String(utf8);
    out.push_back(std::move(utf8));
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw, const TokenizerConfig& cfg) {
  cfg.validate();
  std::vector<std::string> out;
  if (raw.empty()) return out;

  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString source =
      icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  const icu::UnicodeString text = nfc().normalize(source, status);
  if (U_FAILURE(status)) return out;

  icu::UnicodeString current;
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    const bool inside = cfg.strip_punctuation ? is_word_char(c) : !u_isUWhiteSpace(c);
    if (inside) {
      current.append(c);
    } else {
      emit_token(std::move(current), cfg, out);
      current.remove();
    }
  }
  emit_token(std::move(current), cfg, out);
  return out;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> tokens, std::vector<std::uint64_t> doc_freq,
                                  std::uint64_t n_docs) {
  if (tokens.size() != doc_freq.size()) {
    throw Error(ErrorCode::BadHeader, "vocabulary token and doc_freq lengths differ");
  }
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (!(tokens[i - 1] < tokens[i])) {
      throw Error(ErrorCode::BadHeader, "vocabulary tokens must be strictly increasing");
    }
  }
  for (const auto df : doc_freq) {
    if (df > n_docs) throw Error(ErrorCode::BadHeader, "doc_freq exceeds n_docs");
  }
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.doc_freq_ = std::move(doc_freq);
  v.n_docs_ = n_docs;
  return v;
}

std::optional<TokenId> Vocabulary::id_of(std::string_view token) const {
  const auto it = std::lower_bound(tokens_.begin(), tokens_.end(), token,
                                   [](const std::string& a, std::string_view b) { return a < b; });
  if (it == tokens_.end() || *it != token) return std::nullopt;
  return static_cast<TokenId>(it - tokens_.begin());
}

const std::string& Vocabulary::token_of(TokenId id) const {
  if (id >= tokens_.size()) throw Error(ErrorCode::UnknownWord, "token id out of range");
  return tokens_[id];
}

std::uint64_t Vocabulary::doc_freq(TokenId id) const {
  if (id >= doc_freq_.size()) throw Error(ErrorCode::UnknownWord, "token id out of range");
  return doc_freq_[id];
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot build a vocabulary from zero documents");
  const auto n = static_cast<std::int64_t>(docs.size());

  std::vector<std::vector<std::string_view>> unique(docs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t d = 0; d < n; ++d) {
    auto& u = unique[d];
    u.assign(docs[d].begin(), docs[d].end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
  }

  std::vector<std::string_view> all;
  for (const auto& u : unique) all.insert(all.end(), u.begin(), u.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  Vocabulary v;
  v.tokens_.assign(all.begin(), all.end());
  v.doc_freq_.assign(all.size(), 0);
  v.n_docs_ = docs.size();

#pragma omp parallel
  {
    std::vector<std::uint64_t> local(all.size(), 0);
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t d = 0; d < n; ++d) {
      for (const auto tok : unique[d]) {
        const auto it = std::lower_bound(all.begin(), all.end(), tok);
        ++local[static_cast<std::size_t>(it - all.begin())];
      }
    }
#pragma omp critical(topiceval_vocab_merge)
    for (std::size_t i = 0; i < local.size(); ++i) v.doc_freq_[i] += local[i];
  }
  return v;
}

Vocabulary build_vocabulary_serial(std::span<const std::vector<std::string>> docs) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot build a vocabulary from zero documents");
  std::map<std::string, std::uint64_t> df;
  for (const auto& doc : docs) {
    const std::set<std::string> seen(doc.begin(), doc.end());
    for (const auto& tok : seen) ++df[tok];
  }
  Vocabulary v;
  for (auto& [tok, count] : df) {
    v.tokens_.push_back(tok);
    v.doc_freq_.push_back(count);
  }
  v.n_docs_ = docs.size();
  return v;
}

namespace {

SparseDoc run_length(std::vector<TokenId> ids) {
  std::sort(ids.begin(), ids.end());
  SparseDoc out;
  for (const auto id : ids) {
    if (!out.empty() && out.back().id == id) {
      ++out.back().count;
    } else {
      out.push_back({id, 1});
    }
  }
  return out;
}

}  // namespace

SparseDoc doc2bow(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (const auto id = vocab.id_of(tok)) ids.push_back(*id);
  }
  return run_length(std::move(ids));
}

std::vector<SparseRow> tfidf(const BowCorpus& corpus) {
  if (corpus.docs.empty() || !corpus.vocab) throw Error(ErrorCode::EmptyCorpus, "tfidf of an empty corpus");
  const auto& vocab = *corpus.vocab;
  const double n_docs = static_cast<double>(vocab.n_docs());
  std::vector<double> idf(vocab.size());
  for (TokenId t = 0; t < vocab.size(); ++t) {
    const auto df = vocab.doc_freq(t);
    idf[t] = df == 0 ? 0.0 : std::log(n_docs / static_cast<double>(df));
  }
  std::vector<SparseRow> rows(corpus.docs.size());
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    rows[d].reserve(corpus.docs[d].size());
    for (const auto& e : corpus.docs[d]) rows[d].push_back({e.id, e.count * idf[e.id]});
  }
  return rows;
}

Corpus corpus_from_tokens(std::vector<std::string> doc_ids, std::span<const std::vector<std::string>> tokens,
                          std::shared_ptr<const Vocabulary> vocab) {
  if (doc_ids.size() != tokens.size()) {
    throw Error(ErrorCode::MisalignedInputs, "doc id count differs from document count");
  }
  Corpus corpus;
  corpus.doc_ids = std::move(doc_ids);
  corpus.sequences.resize(tokens.size());
  corpus.bow.docs.resize(tokens.size());
  const auto n = static_cast<std::int64_t>(tokens.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t d = 0; d < n; ++d) {
    auto& seq = corpus.sequences[d];
    seq.reserve(tokens[d].size());
    for (const auto& tok : tokens[d]) {
      if (const auto id = vocab->id_of(tok)) seq.push_back(*id);
    }
    corpus.bow.docs[d] = run_length(seq);
  }
  corpus.bow.vocab = std::move(vocab);
  return corpus;
}

Corpus build_corpus(std::span<const RawDocument> docs, const TokenizerConfig& cfg) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "no documents to preprocess");
  cfg.validate();
  std::vector<std::vector<std::string>> tokens(docs.size());
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t d = 0; d < n; ++d) tokens[d] = tokenize(docs[d].text, cfg);

  auto vocab = std::make_shared<const Vocabulary>(build_vocabulary(tokens));
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const auto& doc : docs) ids.push_back(doc.id);
  return corpus_from_tokens(std::move(ids), tokens, std::move(vocab));
}

}  // namespace topiceval
