#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "topiceval/cli/archive.hpp"
#include "topiceval/cli/corpus_io.hpp"
#include "topiceval/cli/csv.hpp"
#include "topiceval/cli/records.hpp"
#include "topiceval/cli/report.hpp"
#include "topiceval/cli/topics_io.hpp"
#include "topiceval/error.hpp"

using namespace topiceval;
using namespace topiceval::cli;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

std::vector<RunRecord> table1() {
  std::ifstream in(testkit::fixture("table1_records.csv"), std::ios::binary);
  return read_records_csv(in);
}

}  // namespace

TEST(Csv, RoundTripWithQuoting) {
  const std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "two\nlines", ""};
  std::ostringstream out;
  write_csv_row(out, fields);
  write_csv_row(out, {"a", "b"});
  EXPECT_EQ(out.str().substr(0, 6), "plain,");
  std::istringstream in(out.str());
  const auto rows = read_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], fields);
  EXPECT_EQ(rows[1], (CsvRow{"a", "b"}));
}

TEST(Csv, UnterminatedQuote) {
  std::istringstream in("a,\"b\n");
  EXPECT_EQ(code_of([&] { read_csv(in); }), ErrorCode::UnreadableInput);
}

TEST(Csv, NumbersRoundTrip) {
  for (const double v : {0.1, 1.0 / 3.0, 0.6687, 1e-300, 2.5}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(CorpusIo, TextFolder) {
  const auto dir = testkit::scratch_dir("folder");
  write_file(dir / "b.txt", "second document");
  write_file(dir / "a.txt", "first document");
  write_file(dir / "sub" / "c.txt", "third");
  write_file(dir / ".hidden", "skip me");
  EXPECT_EQ(detect_format(dir), InputFormat::dir);
  const auto docs = load_documents(dir, InputFormat::dir);
  ASSERT_EQ(docs.size(), 3u);
  EXPECT_EQ(docs[0].id, "a.txt");
  EXPECT_EQ(docs[0].text, "first document");
  EXPECT_EQ(docs[1].id, "b.txt");
  EXPECT_EQ(docs[2].id, "sub/c.txt");
}

TEST(CorpusIo, CsvColumns) {
  const auto dir = testkit::scratch_dir("csvcols");
  write_file(dir / "docs.csv", "id,body\r\nx1,\"hello, world\"\r\nx2,bye\r\n");
  LoadOptions opts;
  opts.text_column = "body";
  const auto docs = load_documents(dir / "docs.csv", detect_format(dir / "docs.csv"), opts);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].id, "x1");
  EXPECT_EQ(docs[0].text, "hello, world");
  EXPECT_EQ(code_of([&] { load_documents(dir / "docs.csv", InputFormat::csv); }), ErrorCode::MissingColumn);
}

TEST(CorpusIo, JsonLines) {
  const auto dir = testkit::scratch_dir("jsonl");
  write_file(dir / "d.jsonl", "{\"id\":\"a\",\"text\":\"one\"}\n\n{\"id\":\"b\",\"text\":\"two\"}\n");
  const auto docs = load_documents(dir / "d.jsonl", InputFormat::jsonl);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[1].text, "two");
  write_file(dir / "bad.jsonl", "{\"id\":\"a\",\"body\":\"one\"}\n");
  EXPECT_EQ(code_of([&] { load_documents(dir / "bad.jsonl", InputFormat::jsonl); }), ErrorCode::MissingColumn);
  EXPECT_EQ(code_of([] { parse_format("xml"); }), ErrorCode::UnknownFormat);
}

TEST(CorpusIo, FixtureMatchesSerialVocabulary) {
  const auto docs = load_documents(testkit::fixture("20ng_subset.jsonl"), InputFormat::jsonl);
  ASSERT_EQ(docs.size(), 2000u);
  const TokenizerConfig cfg;
  const auto corpus = build_corpus(docs, cfg);
  std::vector<std::vector<std::string>> tokens;
  for (const auto& d : docs) tokens.push_back(tokenize(d.text, cfg));
  const auto oracle = build_vocabulary_serial(tokens);
  ASSERT_EQ(corpus.vocab().size(), oracle.size());
  EXPECT_TRUE(std::equal(oracle.tokens().begin(), oracle.tokens().end(), corpus.vocab().tokens().begin()));
  EXPECT_TRUE(std::equal(oracle.doc_freqs().begin(), oracle.doc_freqs().end(), corpus.vocab().doc_freqs().begin()));
}

TEST(Archive, RoundTrip) {
  const auto dir = testkit::scratch_dir("archive");
  const auto corpus = testkit::corpus_from_ids(testkit::random_docs(50, 60, 0, 30, 3), 60);
  write_corpus_archive(dir / "c.tec", corpus, TokenizerConfig{});
  const auto back = read_corpus_archive(dir / "c.tec");
  EXPECT_EQ(back.doc_ids, corpus.doc_ids);
  EXPECT_EQ(back.sequences, corpus.sequences);
  EXPECT_EQ(back.bow.docs, corpus.bow.docs);
  EXPECT_TRUE(std::equal(back.vocab().tokens().begin(), back.vocab().tokens().end(), corpus.vocab().tokens().begin()));
  EXPECT_TRUE(
      std::equal(back.vocab().doc_freqs().begin(), back.vocab().doc_freqs().end(), corpus.vocab().doc_freqs().begin()));
  EXPECT_EQ(back.vocab().n_docs(), 50u);
}

TEST(Archive, Corruption) {
  const auto dir = testkit::scratch_dir("archive_bad");
  const auto corpus = testkit::corpus_from_ids(testkit::random_docs(20, 30, 1, 10, 4), 30);
  write_corpus_archive(dir / "c.tec", corpus, TokenizerConfig{});
  const auto bytes = slurp(dir / "c.tec");

  auto flipped = bytes;
  flipped[flipped.size() - 3] ^= 0x5a;
  write_file(dir / "flip.tec", flipped);
  EXPECT_EQ(code_of([&] { read_corpus_archive(dir / "flip.tec"); }), ErrorCode::ChecksumMismatch);

  write_file(dir / "short.tec", bytes.substr(0, bytes.size() - 10));
  EXPECT_EQ(code_of([&] { read_corpus_archive(dir / "short.tec"); }), ErrorCode::TruncatedFile);

  write_file(dir / "header.tec", "{\"format\":\"other\"}\n");
  EXPECT_EQ(code_of([&] { read_corpus_archive(dir / "header.tec"); }), ErrorCode::BadHeader);

  EXPECT_EQ(code_of([&] { read_corpus_archive(dir / "missing.tec"); }), ErrorCode::UnreadableInput);
}

TEST(TopicsIo, RoundTrip) {
  const auto dir = testkit::scratch_dir("topics");
  const auto corpus = testkit::corpus_from_ids({{0, 1, 2, 3}, {2, 3, 4}}, 5);
  TopicSet set;
  set.topics.push_back(make_topic_entry(0, std::vector<double>{5, 4, 0, 1, 0}, 3));
  set.topics.push_back(make_topic_entry(3, std::vector<double>{0, 0, 2, 2, 1}, 2));
  write_topics(dir / "t.json", set, corpus.vocab(), {{"model", "test"}});
  const auto back = read_topics(dir / "t.json", corpus.vocab());
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.topics[i].label, set.topics[i].label);
    EXPECT_EQ(back.topics[i].words, set.topics[i].words);
    EXPECT_EQ(back.topics[i].weights, set.topics[i].weights);
    ASSERT_TRUE(back.topics[i].distribution.has_value());
    EXPECT_TRUE(std::equal(back.topics[i].distribution->probs().begin(), back.topics[i].distribution->probs().end(),
                           set.topics[i].distribution->probs().begin()));
  }
}

TEST(TopicsIo, BareListsAndUnknownWords) {
  const auto dir = testkit::scratch_dir("topics_bare");
  const auto corpus = testkit::corpus_from_ids({{0, 1, 2}}, 3);
  write_file(dir / "t.json", R"({"topics": [["w1002", "w1000"], {"words": ["w1001"]}]})");
  const auto set = read_topics(dir / "t.json", corpus.vocab());
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.topics[0].words, (std::vector<TokenId>{2, 0}));
  EXPECT_FALSE(set.topics[1].distribution.has_value());
  write_file(dir / "u.json", R"({"topics": [["w1000", "zebra"]]})");
  EXPECT_EQ(code_of([&] { read_topics(dir / "u.json", corpus.vocab()); }), ErrorCode::WordNotInCorpus);
}

TEST(Records, CsvRoundTripSortsAndKeepsGaps) {
  std::vector<RunRecord> recs(3);
  recs[0] = {"b", "enc", 10, 0.5, 0.9, 4, 42, "t"};
  recs[1] = {"a", "enc2", 20, std::nullopt, std::nullopt, std::nullopt, std::nullopt, "t"};
  recs[2] = {"a", "enc", 10, -0.25, 1.0, 12, 7, "t"};
  std::ostringstream out;
  write_records_csv(out, recs);
  EXPECT_EQ(out.str(),
            "dataset,encoder,params,coherence,diversity,k,seed\r\n"
            "a,enc,10,-0.25,1,12,7\r\n"
            "a,enc2,20,,,,\r\n"
            "b,enc,10,0.5,0.9,4,42\r\n");
  std::istringstream in(out.str());
  const auto back = read_records_csv(in);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].coherence, -0.25);
  EXPECT_FALSE(back[1].coherence.has_value());
  EXPECT_EQ(back[2].k, 4u);
}

TEST(Records, Validation) {
  RunRecord r{"d", "e", 0, 0.1, 0.1, {}, {}, ""};
  EXPECT_EQ(code_of([&] { r.validate(); }), ErrorCode::InvalidArgument);
  r.params = 5;
  r.coherence = 1.5;
  EXPECT_EQ(code_of([&] { r.validate(); }), ErrorCode::InvalidArgument);
  std::istringstream in("dataset,encoder,params\r\nd,e,5\r\n");
  EXPECT_EQ(code_of([&] { read_records_csv(in); }), ErrorCode::MissingColumn);
}

TEST(Report, PublishedMiniLmMean) {
  const auto rows = summarize(table1(), ReportMetric::coherence);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0].encoder, "MiniLM-L6");
  EXPECT_EQ(rows[0].count, 10u);
  EXPECT_EQ(rows[0].missing, 1u);
  // Column in ten-thousandths, summed exactly.
  const long column[] = {6687, 8488, 5777, 4932, 6486, 6312, 6718, 5980, 5798, 5440};
  long sum = 0;
  for (const long v : column) sum += v;
  EXPECT_NEAR(*rows[0].mean, static_cast<double>(sum) / 10.0 / 10000.0, 1e-12);
  EXPECT_NEAR(*rows[0].mean, 0.6262, 1e-4);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].params, rows[i].params);
}

TEST(Report, SingleRecordHasZeroStd) {
  const std::vector<RunRecord> recs = {{"d", "e", 5, 0.3, {}, {}, {}, ""}};
  const auto rows = summarize(recs, ReportMetric::coherence);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(*rows[0].mean, 0.3);
  EXPECT_EQ(*rows[0].stddev, 0.0);
  const auto div = summarize(recs, ReportMetric::diversity);
  EXPECT_FALSE(div[0].mean.has_value());
  EXPECT_EQ(div[0].missing, 1u);
}

TEST(Report, OutputIndependentOfRecordOrder) {
  auto recs = table1();
  const auto render = [](const std::vector<RunRecord>& r) {
    std::ostringstream out;
    const auto rows = summarize(r, ReportMetric::coherence);
    write_summary_csv(out, rows);
    write_figure_csv(out, rows);
    return out.str();
  };
  const auto want = render(recs);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(recs.begin(), recs.end(), rng);
    EXPECT_EQ(render(recs), want);
  }
}

TEST(Report, Errors) {
  EXPECT_EQ(code_of([] { summarize({}, ReportMetric::coherence); }), ErrorCode::EmptyRecords);
  const std::vector<RunRecord> recs = {{"d1", "e", 5, 0.3, {}, {}, {}, ""}, {"d2", "e", 6, 0.3, {}, {}, {}, ""}};
  EXPECT_EQ(code_of([&] { summarize(recs, ReportMetric::coherence); }), ErrorCode::InvalidArgument);
}
