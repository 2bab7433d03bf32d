#include "topiceval/cooccur.hpp"

#include <algorithm>
#include <set>

#include "topiceval/error.hpp"

namespace topiceval {

namespace {

std::size_t packed_index(std::size_t i, std::size_t j, std::size_t n) noexcept {
  // i < j
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<TokenId> normalize_word_set(std::span<const TokenId> words) {
  if (words.empty()) throw Error(ErrorCode::EmptyWordSet, "co-occurrence word set is empty");
  std::vector<TokenId> out(words.begin(), words.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Dense token id -> word set position (-1 when not in the set).
std::vector<std::int32_t> position_table(const std::vector<TokenId>& words) {
  std::vector<std::int32_t> table(static_cast<std::size_t>(words.back()) + 1, -1);
  for (std::size_t i = 0; i < words.size(); ++i) table[words[i]] = static_cast<std::int32_t>(i);
  return table;
}

struct Counts {
  explicit Counts(std::size_t n) : occur(n, 0), joint(n * (n - 1) / 2, 0) {}

  void add_virtual_document(std::vector<std::int32_t>& present) {
    ++n_virtual;
    std::sort(present.begin(), present.end());
    const std::size_t n = occur.size();
    for (std::size_t a = 0; a < present.size(); ++a) {
      const auto i = static_cast<std::size_t>(present[a]);
      ++occur[i];
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        ++joint[packed_index(i, static_cast<std::size_t>(present[b]), n)];
      }
    }
  }

  void merge(const Counts& other) {
    n_virtual += other.n_virtual;
    for (std::size_t i = 0; i < occur.size(); ++i) occur[i] += other.occur[i];
    for (std::size_t i = 0; i < joint.size(); ++i) joint[i] += other.joint[i];
  }

  std::uint64_t n_virtual = 0;
  std::vector<std::uint64_t> occur;
  std::vector<std::uint64_t> joint;
};

void validate_window(std::size_t size, std::size_t step) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "window size must be >= 1");
  if (step == 0) throw Error(ErrorCode::InvalidArgument, "window step must be >= 1");
}

}  // namespace

CooccurrenceStats::CooccurrenceStats(EstimationMode mode, std::size_t window_size, std::size_t window_step,
                                     std::vector<TokenId> words, std::uint64_t n_virtual,
                                     std::vector<std::uint64_t> occur, std::vector<std::uint64_t> joint)
    : mode_(mode),
      window_size_(window_size),
      window_step_(window_step),
      words_(std::move(words)),
      n_virtual_(n_virtual),
      occur_(std::move(occur)),
      joint_(std::move(joint)) {
  const std::size_t n = words_.size();
  if (n == 0) throw Error(ErrorCode::EmptyWordSet, "co-occurrence word set is empty");
  if (occur_.size() != n || joint_.size() != n * (n - 1) / 2) {
    throw Error(ErrorCode::InvalidArgument, "count arrays do not match the word set");
  }
  if (n_virtual_ == 0) throw Error(ErrorCode::InvalidArgument, "n_virtual must be >= 1");
}

bool CooccurrenceStats::contains(TokenId w) const noexcept {
  return std::binary_search(words_.begin(), words_.end(), w);
}

std::size_t CooccurrenceStats::position(TokenId w) const {
  const auto it = std::lower_bound(words_.begin(), words_.end(), w);
  if (it == words_.end() || *it != w) {
    throw Error(ErrorCode::UnknownWord, "word id " + std::to_string(w) + " is not in the counted word set");
  }
  return static_cast<std::size_t>(it - words_.begin());
}

std::uint64_t CooccurrenceStats::occur(TokenId w) const { return occur_[position(w)]; }

std::uint64_t CooccurrenceStats::joint(TokenId a, TokenId b) const {
  auto i = position(a);
  auto j = position(b);
  if (i == j) return occur_[i];
  if (i > j) std::swap(i, j);
  return joint_[packed_index(i, j, words_.size())];
}

double CooccurrenceStats::prob(TokenId w) const {
  return static_cast<double>(occur(w)) / static_cast<double>(n_virtual_);
}

double CooccurrenceStats::joint_prob(TokenId a, TokenId b) const {
  return static_cast<double>(joint(a, b)) / static_cast<double>(n_virtual_);
}

std::uint64_t window_count(std::size_t len, std::size_t size, std::size_t step) noexcept {
  if (len <= size) return 1;
  return (len - size) / step + 1;
}

CooccurrenceStats count_document_stats(const BowCorpus& corpus, std::span<const TokenId> words) {
  auto set = normalize_word_set(words);
  const auto table = position_table(set);
  const auto n_docs = static_cast<std::int64_t>(corpus.docs.size());
  if (n_docs == 0) throw Error(ErrorCode::EmptyCorpus, "cannot count over zero documents");

  Counts total(set.size());
#pragma omp parallel
  {
    Counts local(set.size());
    std::vector<std::int32_t> present;
#pragma omp for schedule(dynamic, 32) nowait
    for (std::int64_t d = 0; d < n_docs; ++d) {
      present.clear();
      for (const auto& e : corpus.docs[d]) {
        if (e.id < table.size() && table[e.id] >= 0) present.push_back(table[e.id]);
      }
      local.add_virtual_document(present);
    }
#pragma omp critical(topiceval_cooccur_merge)
    total.merge(local);
  }
  return CooccurrenceStats(EstimationMode::document, kWholeDocument, 1, std::move(set), total.n_virtual,
                           std::move(total.occur), std::move(total.joint));
}

CooccurrenceStats count_window_stats(std::span<const std::vector<TokenId>> docs, std::span<const TokenId> words,
                                     std::size_t size, std::size_t step) {
  validate_window(size, step);
  auto set = normalize_word_set(words);
  const auto table = position_table(set);
  const auto n_docs = static_cast<std::int64_t>(docs.size());
  if (n_docs == 0) throw Error(ErrorCode::EmptyCorpus, "cannot count over zero documents");

  Counts total(set.size());
#pragma omp parallel
  {
    Counts local(set.size());
    // stamp[p] == current window index  <=>  word p already collected.
    std::vector<std::uint64_t> stamp(set.size(), std::numeric_limits<std::uint64_t>::max());
    std::uint64_t window_index = 0;
    std::vector<std::int32_t> present;
#pragma omp for schedule(dynamic, 8) nowait
    for (std::int64_t d = 0; d < n_docs; ++d) {
      const auto& doc = docs[d];
      const std::size_t width = std::min(size, doc.size());
      const auto n_windows = window_count(doc.size(), size, step);
      for (std::uint64_t w = 0; w < n_windows; ++w, ++window_index) {
        const std::size_t start = static_cast<std::size_t>(w) * step;
        present.clear();
        for (std::size_t t = start; t < start + width; ++t) {
          const TokenId id = doc[t];
          if (id >= table.size() || table[id] < 0) continue;
          const auto p = table[id];
          if (stamp[p] != window_index) {
            stamp[p] = window_index;
            present.push_back(p);
          }
        }
        local.add_virtual_document(present);
      }
    }
#pragma omp critical(topiceval_cooccur_merge)
    total.merge(local);
  }
  return CooccurrenceStats(EstimationMode::window, size, step, std::move(set), total.n_virtual,
                           std::move(total.occur), std::move(total.joint));
}

namespace serial {

namespace {

CooccurrenceStats from_sets(EstimationMode mode, std::size_t size, std::size_t step, std::vector<TokenId> set,
                            const std::vector<std::set<TokenId>>& virtual_docs) {
  const std::size_t n = set.size();
  std::vector<std::uint64_t> occur(n, 0);
  std::vector<std::uint64_t> joint(n * (n - 1) / 2, 0);
  for (const auto& vd : virtual_docs) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!vd.contains(set[i])) continue;
      ++occur[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (vd.contains(set[j])) ++joint[packed_index(i, j, n)];
      }
    }
  }
  return CooccurrenceStats(mode, size, step, std::move(set), virtual_docs.size(), std::move(occur),
                           std::move(joint));
}

}  // namespace

CooccurrenceStats count_document_stats(const BowCorpus& corpus, std::span<const TokenId> words) {
  auto set = normalize_word_set(words);
  if (corpus.docs.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot count over zero documents");
  std::vector<std::set<TokenId>> virtual_docs;
  for (const auto& doc : corpus.docs) {
    std::set<TokenId> s;
    for (const auto& e : doc) s.insert(e.id);
    virtual_docs.push_back(std::move(s));
  }
  return from_sets(EstimationMode::document, kWholeDocument, 1, std::move(set), virtual_docs);
}

CooccurrenceStats count_window_stats(std::span<const std::vector<TokenId>> docs, std::span<const TokenId> words,
                                     std::size_t size, std::size_t step) {
  validate_window(size, step);
  auto set = normalize_word_set(words);
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot count over zero documents");
  std::vector<std::set<TokenId>> virtual_docs;
  for (const auto& doc : docs) {
    if (doc.size() <= size) {
      virtual_docs.emplace_back(doc.begin(), doc.end());
      continue;
    }
    for (std::size_t start = 0; start + size <= doc.size(); start += step) {
      virtual_docs.emplace_back(doc.begin() + static_cast<std::ptrdiff_t>(start),
                                doc.begin() + static_cast<std::ptrdiff_t>(start + size));
    }
  }
  return from_sets(EstimationMode::window, size, step, std::move(set), virtual_docs);
}

}  // namespace serial

}  // namespace topiceval
