#include "topiceval/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "topiceval/cli/archive.hpp"
#include "topiceval/cli/corpus_io.hpp"
#include "topiceval/cli/csv.hpp"
#include "topiceval/cli/evaluation.hpp"
#include "topiceval/cli/records.hpp"
#include "topiceval/cli/report.hpp"
#include "topiceval/cli/sweep.hpp"
#include "topiceval/cli/topics_io.hpp"
#include "topiceval/error.hpp"
#include "topiceval/lda.hpp"
#include "topiceval/nmf.hpp"
#include "topiceval/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace topiceval::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t default_seed() {
  const char* env = std::getenv("TOPICEVAL_SEED");
  if (!env || !*env) return kDefaultSeed;
  std::uint64_t v = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("TOPICEVAL_SEED='{}' is not an unsigned integer", s));
  }
  return v;
}

struct TokenizerFlags {
  std::size_t min_len = 2;
  std::size_t max_len = 15;
  bool keep_case = false;
  bool keep_punctuation = false;
  bool allow_digits = false;
  bool no_stopwords = false;
  std::string stopwords_file;

  void add(CLI::App* app) {
    app->add_option("--min-len", min_len, "Minimum token length in code points")->capture_default_str();
    app->add_option("--max-len", max_len, "Maximum token length in code points")->capture_default_str();
    app->add_flag("--keep-case", keep_case, "Do not lowercase");
    app->add_flag("--keep-punctuation", keep_punctuation, "Split on whitespace only");
    app->add_flag("--allow-digits", allow_digits, "Keep tokens that are not purely alphabetic");
    app->add_flag("--no-stopwords", no_stopwords, "Keep stopwords");
    app->add_option("--stopwords", stopwords_file, "Stopword file, one word per line");
  }

  TokenizerConfig config() const {
    TokenizerConfig cfg;
    cfg.min_token_len = min_len;
    cfg.max_token_len = max_len;
    cfg.lowercase = !keep_case;
    cfg.strip_punctuation = !keep_punctuation;
    cfg.alphabetic_only = !allow_digits;
    if (no_stopwords) cfg.stopwords.clear();
    if (!stopwords_file.empty()) {
      std::ifstream in(stopwords_file);
      if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + stopwords_file);
      cfg.stopwords.clear();
      std::string line;
      while (std::getline(in, line)) {
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (!line.empty()) cfg.stopwords.insert(line);
      }
    }
    cfg.validate();
    return cfg;
  }
};

struct CoherenceFlags {
  std::string measure = "c_v";
  std::size_t window = 0;
  std::size_t window_step = 1;
  std::size_t top_n = 10;
  double epsilon = 1e-12;
  std::string cv_reference = "mean";

  void add(CLI::App* app) {
    app->add_option("--measure", measure, "Coherence measure")
        ->check(CLI::IsMember({"umass", "c_npmi", "npmi", "c_v"}))
        ->capture_default_str();
    app->add_option("--window", window, "Sliding window size (0: measure default)")->capture_default_str();
    app->add_option("--window-step", window_step, "Sliding window stride")->capture_default_str();
    app->add_option("--topn", top_n, "Top words per topic")->capture_default_str();
    app->add_option("--epsilon", epsilon, "UMass smoothing")->capture_default_str();
    app->add_option("--cv-reference", cv_reference, "C_v reference vector")
        ->check(CLI::IsMember({"mean", "complement"}))
        ->capture_default_str();
  }

  CoherenceConfig config() const {
    CoherenceConfig cfg;
    cfg.measure = parse_measure(measure);
    cfg.window_size = window;
    cfg.window_step = window_step;
    cfg.top_n = top_n;
    cfg.epsilon = epsilon;
    cfg.cv_reference = cv_reference == "complement" ? CvReference::complement_sum : CvReference::mean_of_all;
    cfg.validate();
    return cfg;
  }
};

struct PipelineFlags {
  std::size_t reduce_dim = 5;
  std::string backend = "hdbscan";
  std::size_t min_cluster_size = 10;
  std::size_t min_samples = 0;
  std::size_t kmeans_k = 10;
  std::size_t kmeans_max_iters = 300;

  void add(CLI::App* app) {
    app->add_option("--reduce-dim", reduce_dim, "PCA target dimension (0 keeps the input)")->capture_default_str();
    app->add_option("--backend", backend, "Clustering backend")
        ->check(CLI::IsMember({"hdbscan", "kmeans"}))
        ->capture_default_str();
    app->add_option("--min-cluster-size", min_cluster_size, "HDBSCAN minimum cluster size")->capture_default_str();
    app->add_option("--min-samples", min_samples, "HDBSCAN min samples (0: min cluster size)")->capture_default_str();
    app->add_option("--kmeans-k", kmeans_k, "Clusters for the k-means backend")->capture_default_str();
    app->add_option("--kmeans-max-iters", kmeans_max_iters, "k-means iteration cap")->capture_default_str();
  }

  PipelineConfig config(std::uint64_t seed, std::size_t top_n) const {
    PipelineConfig cfg;
    cfg.reduce_dim = reduce_dim;
    cfg.backend = backend == "kmeans" ? ClusterBackend::kmeans : ClusterBackend::hdbscan;
    cfg.min_cluster_size = min_cluster_size;
    cfg.min_samples = min_samples;
    cfg.kmeans_k = kmeans_k;
    cfg.kmeans_max_iters = kmeans_max_iters;
    cfg.seed = seed;
    cfg.top_n = top_n;
    return cfg;
  }
};

/// Output file, or the command's stdout when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      out_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(ErrorCode::UnreadableInput, "cannot write " + path);
    out_ = &file_;
  }
  std::ostream& get() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

BowCorpus drop_empty(const BowCorpus& bow, std::size_t& dropped) {
  BowCorpus out{bow.vocab, {}};
  for (const auto& d : bow.docs) {
    if (!d.empty()) out.docs.push_back(d);
  }
  dropped = bow.docs.size() - out.docs.size();
  return out;
}

void write_stats_csv(const std::string& path, const CooccurrenceStats& stats, const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableInput, "cannot write " + path);
  write_csv_row(out, {"word_i", "word_j", "joint", "occur_i", "occur_j", "n_virtual"});
  const auto words = stats.word_set();
  const auto n = std::to_string(stats.n_virtual());
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      write_csv_row(out, {vocab.token_of(words[i]), vocab.token_of(words[j]),
                          std::to_string(stats.joint(words[i], words[j])), std::to_string(stats.occur(words[i])),
                          std::to_string(stats.occur(words[j])), n});
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topic model evaluation: preprocessing, models, coherence, diversity and sweeps", "topiceval"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // preprocess
  std::string input, format, text_column = "text", id_column = "id", out_path;
  TokenizerFlags tok;
  auto* pre = app.add_subcommand("preprocess", "Tokenize a dataset into a corpus archive");
  pre->add_option("--input", input, "Text folder, CSV or JSON-lines file")->required();
  pre->add_option("--format", format, "dir, csv or jsonl (default: from the path)");
  pre->add_option("--text-column", text_column, "CSV column / JSON field holding the text")->capture_default_str();
  pre->add_option("--id-column", id_column, "CSV column / JSON field holding the id")->capture_default_str();
  pre->add_option("--out", out_path, "Archive to write")->required();
  tok.add(pre);

  // shared model options
  std::string corpus_path, topics_path, embeddings_path, assignments_path;
  std::optional<std::uint64_t> seed_flag;
  std::size_t k = 10, top_n = 10;
  bool as_json = false;

  auto* lda = app.add_subcommand("lda", "Fit LDA by collapsed Gibbs sampling");
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t sweeps = 1000;
  lda->add_option("--corpus", corpus_path, "Corpus archive")->required();
  lda->add_option("--k", k, "Number of topics")->capture_default_str();
  lda->add_option("--alpha", alpha, "Document-topic prior (default 50/K)");
  lda->add_option("--beta", beta, "Topic-word prior")->capture_default_str();
  lda->add_option("--sweeps", sweeps, "Gibbs sweeps")->capture_default_str();
  lda->add_option("--seed", seed_flag, "Random seed (default: TOPICEVAL_SEED or 42)");
  lda->add_option("--topn", top_n, "Top words per topic")->capture_default_str();
  lda->add_option("--out", out_path, "Topics JSON to write")->required();

  auto* nmf = app.add_subcommand("nmf", "Fit NMF by multiplicative updates");
  std::size_t max_iters = 200;
  double tol = 1e-4;
  bool use_tfidf = false;
  nmf->add_option("--corpus", corpus_path, "Corpus archive")->required();
  nmf->add_option("--k", k, "Number of topics")->capture_default_str();
  nmf->add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
  nmf->add_option("--tol", tol, "Relative objective change to stop at")->capture_default_str();
  nmf->add_flag("--tfidf", use_tfidf, "Factorize TF-IDF weights instead of counts");
  nmf->add_option("--seed", seed_flag, "Random seed (default: TOPICEVAL_SEED or 42)");
  nmf->add_option("--topn", top_n, "Top words per topic")->capture_default_str();
  nmf->add_option("--out", out_path, "Topics JSON to write")->required();

  PipelineFlags pipe_flags;
  auto* pipeline = app.add_subcommand("pipeline", "Embeddings -> PCA -> clustering -> c-TF-IDF topics");
  pipeline->add_option("--corpus", corpus_path, "Corpus archive")->required();
  pipeline->add_option("--embeddings", embeddings_path, "EMB1 embedding file")->required();
  pipeline->add_option("--seed", seed_flag, "Random seed (default: TOPICEVAL_SEED or 42)");
  pipeline->add_option("--topn", top_n, "Top words per topic")->capture_default_str();
  pipeline->add_option("--out", out_path, "Topics JSON to write")->required();
  pipeline->add_option("--assignments", assignments_path, "CSV of doc_id,label to write");
  pipe_flags.add(pipeline);

  CoherenceFlags coh;
  std::string stats_csv;
  auto* coherence = app.add_subcommand("coherence", "Score topic coherence against a corpus");
  coherence->add_option("--corpus", corpus_path, "Corpus archive")->required();
  coherence->add_option("--topics", topics_path, "Topics JSON")->required();
  coherence->add_option("--stats-csv", stats_csv, "Dump the co-occurrence counts used");
  coherence->add_flag("--json", as_json, "Emit JSON instead of CSV");
  coh.add(coherence);

  std::string diversity = "unique";
  const auto add_diversity = [&](CLI::App* a) {
    a->add_option("--diversity", diversity, "Diversity measure")
        ->check(CLI::IsMember({"unique", "jsd", "hellinger", "cosine"}))
        ->capture_default_str();
  };
  auto* div = app.add_subcommand("diversity", "Score topic diversity");
  div->add_option("--corpus", corpus_path, "Corpus archive the topics were built on")->required();
  div->add_option("--topics", topics_path, "Topics JSON")->required();
  div->add_option("--topn", top_n, "Top words per topic (unique diversity)")->capture_default_str();
  div->add_flag("--json", as_json, "Emit JSON instead of CSV");
  add_diversity(div);

  std::string dataset, encoder;
  std::uint64_t params = 0;
  auto* evaluate = app.add_subcommand("evaluate", "Score one (dataset, encoder) run into a record");
  evaluate->add_option("--corpus", corpus_path, "Corpus archive")->required();
  auto* topics_opt = evaluate->add_option("--topics", topics_path, "Topics JSON");
  auto* emb_opt = evaluate->add_option("--embeddings", embeddings_path, "EMB1 file to run the pipeline on");
  topics_opt->excludes(emb_opt);
  evaluate->add_option("--dataset", dataset, "Dataset name")->required();
  evaluate->add_option("--encoder", encoder, "Encoder name")->required();
  evaluate->add_option("--params", params, "Declared encoder parameter count")->required()->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", seed_flag, "Random seed (default: TOPICEVAL_SEED or 42)");
  evaluate->add_option("--out", out_path, "Record file (default: stdout)");
  evaluate->add_flag("--json", as_json, "Emit JSON instead of CSV");
  CoherenceFlags eval_coh;
  eval_coh.add(evaluate);
  add_diversity(evaluate);
  PipelineFlags eval_pipe;
  eval_pipe.add(evaluate);

  std::string config_path, output_dir;
  std::optional<std::size_t> workers, max_new;
  auto* sweep = app.add_subcommand("sweep", "Evaluate every (dataset, encoder) pair of a TOML config");
  sweep->add_option("--config", config_path, "Sweep TOML")->required();
  sweep->add_option("--workers", workers, "Worker threads (overrides the config)");
  sweep->add_option("--output-dir", output_dir, "Output directory (overrides the config)");
  sweep->add_option("--max-new", max_new, "Stop after computing this many new records");

  std::string records_path, metric = "coherence", summary_out, figure_out;
  auto* report = app.add_subcommand("report", "Per-encoder mean and std over datasets");
  report->add_option("--records", records_path, "Records CSV")->required();
  report->add_option("--metric", metric, "Column to aggregate")
      ->check(CLI::IsMember({"coherence", "diversity"}))
      ->capture_default_str();
  report->add_option("--summary-out", summary_out, "Summary CSV (default: stdout)");
  report->add_option("--figure-out", figure_out, "Figure CSV with params,mean,std");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "run 'topiceval " << sub->get_name() << " --help' for usage\n";
    } else {
      err << "run 'topiceval --help' for usage\n";
    }
    return kExitUsage;
  }

  try {
    const auto seed = [&] { return seed_flag ? *seed_flag : default_seed(); };

    if (pre->parsed()) {
      const auto cfg = tok.config();
      const auto fmt_kind = format.empty() ? detect_format(input) : parse_format(format);
      const auto docs = load_documents(input, fmt_kind, LoadOptions{text_column, id_column});
      const auto corpus = build_corpus(docs, cfg);
      write_corpus_archive(out_path, corpus, cfg);
      std::size_t tokens = 0;
      for (const auto& s : corpus.sequences) tokens += s.size();
      fmt::print(out, "documents={} vocabulary={} tokens={}\n", corpus.size(), corpus.vocab().size(), tokens);
    } else if (lda->parsed()) {
      const auto corpus = read_corpus_archive(corpus_path);
      std::size_t dropped = 0;
      const auto bow = drop_empty(corpus.bow, dropped);
      LdaConfig cfg;
      cfg.k = k;
      cfg.alpha = alpha;
      cfg.beta = beta;
      cfg.sweeps = sweeps;
      cfg.seed = seed();
      const auto state = lda_fit(bow, cfg);
      const auto topics = lda_topics(state, beta, top_n);
      write_topics(out_path, topics, corpus.vocab(),
                   {{"model", "lda"},
                    {"k", k},
                    {"alpha", alpha.value_or(50.0 / static_cast<double>(k))},
                    {"beta", beta},
                    {"sweeps", sweeps},
                    {"seed", cfg.seed},
                    {"dropped_empty_documents", dropped}});
      if (dropped > 0) fmt::print(err, "note: {} empty documents left out of the fit\n", dropped);
      fmt::print(out, "topics={} documents={}\n", topics.size(), bow.docs.size());
    } else if (nmf->parsed()) {
      const auto corpus = read_corpus_archive(corpus_path);
      NmfConfig cfg;
      cfg.k = k;
      cfg.max_iters = max_iters;
      cfg.tol = tol;
      cfg.seed = seed();
      const auto factors = nmf_fit(document_term_matrix(corpus.bow, use_tfidf), cfg);
      const auto topics = nmf_topics(factors, top_n);
      write_topics(out_path, topics, corpus.vocab(),
                   {{"model", "nmf"},
                    {"k", k},
                    {"tfidf", use_tfidf},
                    {"iterations", factors.iterations},
                    {"objective", factors.objective_trace.back()},
                    {"seed", cfg.seed}});
      fmt::print(out, "topics={} iterations={} objective={}\n", topics.size(), factors.iterations,
                 format_number(factors.objective_trace.back()));
    } else if (pipeline->parsed()) {
      const auto corpus = read_corpus_archive(corpus_path);
      const auto emb = load_embeddings(embeddings_path);
      const auto cfg = pipe_flags.config(seed(), top_n);
      const auto result = run_pipeline(corpus, emb, cfg);
      const auto& m = result.metadata;
      write_topics(out_path, result.topics, corpus.vocab(),
                   {{"model", "pipeline"},
                    {"backend", to_string(cfg.backend)},
                    {"reduce_dim", m.reduced_dim},
                    {"pca_degenerate", m.pca_degenerate},
                    {"min_cluster_size", cfg.min_cluster_size},
                    {"min_samples", cfg.min_samples == 0 ? cfg.min_cluster_size : cfg.min_samples},
                    {"seed", cfg.seed},
                    {"k", m.k},
                    {"noise_count", m.noise_count},
                    {"noise_fraction", m.noise_fraction}});
      if (!assignments_path.empty()) {
        Sink sink(assignments_path, out);
        write_csv_row(sink.get(), {"doc_id", "label"});
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          write_csv_row(sink.get(), {corpus.doc_ids[i], std::to_string(result.assignment.labels[i])});
        }
      }
      fmt::print(out, "topics={} noise={} noise_fraction={}\n", m.k, m.noise_count, format_number(m.noise_fraction));
    } else if (coherence->parsed()) {
      const auto corpus = read_corpus_archive(corpus_path);
      const auto topics = read_topics(topics_path, corpus.vocab());
      const auto cfg = coh.config();
      const auto ranked = topics.ranked(cfg.top_n);
      if (!stats_csv.empty()) write_stats_csv(stats_csv, estimate_probabilities(corpus, ranked, cfg), corpus.vocab());
      const auto scores = score_topics(corpus, ranked, cfg);
      const double mean = aggregate_mean(scores);
      if (as_json) {
        json j = {{"measure", measure_name(cfg.measure)}, {"top_n", cfg.top_n}, {"scores", scores}, {"mean", mean}};
        if (cfg.measure != Measure::umass) {
          j["window"] = cfg.effective_window();
          j["window_step"] = cfg.window_step;
        }
        out << j.dump(1) << "\n";
      } else {
        write_csv_row(out, {"topic", "coherence"});
        for (std::size_t i = 0; i < scores.size(); ++i) {
          write_csv_row(out, {std::to_string(topics.topics[i].label), format_number(scores[i])});
        }
        write_csv_row(out, {"mean", format_number(mean)});
      }
    } else if (div->parsed()) {
      const auto corpus = read_corpus_archive(corpus_path);
      const auto topics = read_topics(topics_path, corpus.vocab());
      const auto kind = parse_diversity(diversity);
      const double value = topic_diversity(topics, kind, top_n);
      if (as_json) {
        out << json{{"diversity", to_string(kind)}, {"k", topics.size()}, {"value", value}}.dump(1) << "\n";
      } else {
        write_csv_row(out, {"diversity", "k", "value"});
        write_csv_row(out, {to_string(kind), std::to_string(topics.size()), format_number(value)});
      }
    } else if (evaluate->parsed()) {
      if (topics_path.empty() && embeddings_path.empty()) {
        err << "error: evaluate needs --topics or --embeddings\n";
        return kExitUsage;
      }
      const auto corpus = read_corpus_archive(corpus_path);
      EvalSettings settings{eval_coh.config(), parse_diversity(diversity)};
      TopicSet topics;
      RunRecord rec;
      rec.dataset = dataset;
      rec.encoder = encoder;
      rec.params = params;
      if (!topics_path.empty()) {
        topics = read_topics(topics_path, corpus.vocab());
      } else {
        if (!fs::is_regular_file(embeddings_path)) {
          throw Error(ErrorCode::MissingEmbeddingFile, "embedding file " + embeddings_path + " does not exist");
        }
        rec.seed = seed();
        topics = run_pipeline(corpus, load_embeddings(embeddings_path), eval_pipe.config(*rec.seed, settings.coherence.top_n))
                     .topics;
      }
      const auto scores = evaluate_topics(corpus, topics, settings);
      rec.coherence = scores.coherence;
      rec.diversity = scores.diversity;
      rec.k = scores.k;
      rec.timestamp = utc_timestamp();
      rec.validate();
      Sink sink(out_path, out);
      if (as_json) {
        sink.get() << to_json(rec).dump(1) << "\n";
      } else {
        write_records_csv(sink.get(), {rec});
      }
    } else if (sweep->parsed()) {
      auto cfg = load_sweep_config(config_path, default_seed());
      if (workers) cfg.workers = std::max<std::size_t>(1, *workers);
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      const auto outcome = run_sweep(cfg, SweepOptions{max_new});
      for (const auto& g : outcome.gaps) fmt::print(err, "gap: {} / {}: {}\n", g.dataset, g.encoder, g.reason);
      fmt::print(out, "records={} computed={} skipped={} gaps={} pending={}\n", outcome.records.size(),
                 outcome.computed, outcome.skipped, outcome.gaps.size(), outcome.pending);
      fmt::print(out, "wrote {}\n", (cfg.output_dir / "records.csv").string());
    } else if (report->parsed()) {
      std::ifstream in(records_path, std::ios::binary);
      if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + records_path);
      const auto records = read_records_csv(in);
      const auto rows = summarize(records, metric == "diversity" ? ReportMetric::diversity : ReportMetric::coherence);
      {
        Sink sink(summary_out, out);
        write_summary_csv(sink.get(), rows);
      }
      if (!figure_out.empty()) {
        Sink sink(figure_out, out);
        write_figure_csv(sink.get(), rows);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace topiceval::cli
