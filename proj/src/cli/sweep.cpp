#include "topiceval/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <toml.hpp>

#include "topiceval/cli/csv.hpp"
#include "topiceval/embeddings.hpp"
#include "topiceval/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace topiceval::cli {

namespace {

[[noreturn]] void bad_config(const std::string& msg) { throw Error(ErrorCode::BadConfig, msg); }

void check_keys(const toml::table& t, std::string_view where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : t) {
    if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end()) {
      bad_config(fmt::format("unknown key '{}' in [{}]", k.str(), where));
    }
  }
}

const toml::table* section(const toml::table& root, std::string_view name) {
  const auto* node = root.get(name);
  if (!node) return nullptr;
  if (!node->is_table()) bad_config(fmt::format("'{}' must be a table", name));
  return node->as_table();
}

template <typename T>
T get_or(const toml::table* t, std::string_view where, std::string_view key, T fallback) {
  if (!t) return fallback;
  const auto* node = t->get(key);
  if (!node) return fallback;
  if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node->value<std::string>()) return *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto v = node->value<bool>()) return *v;
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = node->value<double>()) return *v;
  } else {
    if (auto v = node->value<std::int64_t>(); v && *v >= 0) return static_cast<T>(*v);
  }
  bad_config(fmt::format("[{}] {} has the wrong type", where, key));
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string sanitize(std::string_view s) {
  std::string out;
  for (const char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  return out;
}

fs::path record_file(const fs::path& dir, const std::string& dataset, const std::string& encoder) {
  std::string key = dataset;
  key.push_back('\0');
  key += encoder;
  const auto crc = crc32_of(std::as_bytes(std::span(key.data(), key.size())));
  return dir / fmt::format("{}__{}__{:08x}.json", sanitize(dataset), sanitize(encoder), crc);
}

void write_atomic(const fs::path& path, const std::string& content) {
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::UnreadableInput, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::UnreadableInput, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::optional<RunRecord> read_existing(const fs::path& path, const std::string& dataset, const std::string& encoder) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    auto rec = record_from_json(json::parse(in));
    if (rec.dataset == dataset && rec.encoder == encoder) return rec;
  } catch (const std::exception&) {
    // A damaged record is recomputed.
  }
  return std::nullopt;
}

}  // namespace

SweepConfig load_sweep_config(const fs::path& path, std::optional<std::uint64_t> default_seed) {
  toml::table root;
  try {
    root = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    std::error_code ec;
    if (!fs::exists(path, ec)) throw Error(ErrorCode::UnreadableInput, "cannot open " + path.string());
    bad_config(fmt::format("{}: {}", path.string(), e.description()));
  }
  check_keys(root, "root", {"sweep", "pipeline", "evaluation", "datasets", "encoders"});
  const auto base = path.parent_path();

  SweepConfig cfg;
  const auto* sweep = section(root, "sweep");
  if (!sweep) bad_config("missing [sweep] section");
  check_keys(*sweep, "sweep", {"output_dir", "workers", "seed"});
  if (!sweep->get("output_dir")) bad_config("[sweep] output_dir is required");
  cfg.output_dir = resolve(base, get_or<std::string>(sweep, "sweep", "output_dir", ""));
  cfg.workers = std::max<std::size_t>(1, get_or<std::size_t>(sweep, "sweep", "workers", 1));
  cfg.seed = get_or<std::uint64_t>(sweep, "sweep", "seed", default_seed.value_or(42));

  const auto* pl = section(root, "pipeline");
  if (pl) check_keys(*pl, "pipeline", {"reduce_dim", "backend", "min_cluster_size", "min_samples", "kmeans_k", "kmeans_max_iters"});
  auto& p = cfg.pipeline;
  p.reduce_dim = get_or<std::size_t>(pl, "pipeline", "reduce_dim", p.reduce_dim);
  const auto backend = get_or<std::string>(pl, "pipeline", "backend", "hdbscan");
  if (backend == "hdbscan") {
    p.backend = ClusterBackend::hdbscan;
  } else if (backend == "kmeans") {
    p.backend = ClusterBackend::kmeans;
  } else {
    bad_config("[pipeline] backend must be hdbscan or kmeans");
  }
  p.min_cluster_size = get_or<std::size_t>(pl, "pipeline", "min_cluster_size", p.min_cluster_size);
  p.min_samples = get_or<std::size_t>(pl, "pipeline", "min_samples", p.min_samples);
  p.kmeans_k = get_or<std::size_t>(pl, "pipeline", "kmeans_k", p.kmeans_k);
  p.kmeans_max_iters = get_or<std::size_t>(pl, "pipeline", "kmeans_max_iters", p.kmeans_max_iters);
  p.seed = cfg.seed;

  const auto* ev = section(root, "evaluation");
  if (ev) check_keys(*ev, "evaluation", {"measure", "window", "window_step", "top_n", "epsilon", "diversity"});
  auto& c = cfg.eval.coherence;
  try {
    c.measure = parse_measure(get_or<std::string>(ev, "evaluation", "measure", "c_v"));
    cfg.eval.diversity = parse_diversity(get_or<std::string>(ev, "evaluation", "diversity", "unique"));
  } catch (const Error& e) {
    bad_config(std::string("[evaluation] ") + e.what());
  }
  c.window_size = get_or<std::size_t>(ev, "evaluation", "window", 0);
  c.window_step = get_or<std::size_t>(ev, "evaluation", "window_step", 1);
  c.top_n = get_or<std::size_t>(ev, "evaluation", "top_n", 10);
  c.epsilon = get_or<double>(ev, "evaluation", "epsilon", 1e-12);
  p.top_n = c.top_n;
  try {
    c.validate();
  } catch (const Error& e) {
    bad_config(std::string("[evaluation] ") + e.what());
  }

  const auto* encoders = section(root, "encoders");
  if (!encoders || encoders->empty()) bad_config("no [encoders.<name>] sections");
  for (const auto& [name, node] : *encoders) {
    const auto* t = node.as_table();
    if (!t) bad_config(fmt::format("encoders.{} must be a table", name.str()));
    const auto where = fmt::format("encoders.{}", name.str());
    check_keys(*t, where, {"params"});
    EncoderSpec e{std::string(name.str()), get_or<std::uint64_t>(t, where, "params", 0)};
    if (e.params == 0) bad_config(where + " needs params > 0");
    cfg.encoders.push_back(std::move(e));
  }

  const auto* datasets = section(root, "datasets");
  if (!datasets || datasets->empty()) bad_config("no [datasets.<name>] sections");
  for (const auto& [name, node] : *datasets) {
    const auto* t = node.as_table();
    const auto where = fmt::format("datasets.{}", name.str());
    if (!t) bad_config(where + " must be a table");
    check_keys(*t, where, {"path", "format", "text_column", "id_column", "embeddings"});
    DatasetSpec d;
    d.name = std::string(name.str());
    if (!t->get("path")) bad_config(where + " needs a path");
    d.path = resolve(base, get_or<std::string>(t, where, "path", ""));
    if (t->get("format")) {
      try {
        d.format = parse_format(get_or<std::string>(t, where, "format", ""));
      } catch (const Error& e) {
        bad_config(where + ": " + e.what());
      }
    }
    d.load.text_column = get_or<std::string>(t, where, "text_column", d.load.text_column);
    d.load.id_column = get_or<std::string>(t, where, "id_column", d.load.id_column);
    if (const auto* emb = section(*t, "embeddings")) {
      for (const auto& [enc, file] : *emb) {
        const auto e = std::string(enc.str());
        if (std::none_of(cfg.encoders.begin(), cfg.encoders.end(), [&](const EncoderSpec& s) { return s.name == e; })) {
          bad_config(fmt::format("{}.embeddings names unknown encoder '{}'", where, e));
        }
        auto v = file.value<std::string>();
        if (!v) bad_config(fmt::format("{}.embeddings.{} must be a path string", where, e));
        d.embeddings[e] = resolve(base, *v);
      }
    }
    cfg.datasets.push_back(std::move(d));
  }
  std::sort(cfg.encoders.begin(), cfg.encoders.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(cfg.datasets.begin(), cfg.datasets.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return cfg;
}

SweepOutcome run_sweep(const SweepConfig& cfg, const SweepOptions& opts) {
  const auto record_dir = cfg.output_dir / "records";
  fs::create_directories(record_dir);

  struct Job {
    const DatasetSpec* dataset;
    const EncoderSpec* encoder;
    fs::path embedding;
    fs::path file;
  };
  SweepOutcome outcome;
  std::vector<Job> pending;
  for (const auto& d : cfg.datasets) {
    for (const auto& e : cfg.encoders) {
      const auto file = record_file(record_dir, d.name, e.name);
      if (auto rec = read_existing(file, d.name, e.name)) {
        outcome.records.push_back(std::move(*rec));
        ++outcome.skipped;
        continue;
      }
      const auto it = d.embeddings.find(e.name);
      std::error_code ec;
      if (it == d.embeddings.end()) {
        outcome.gaps.push_back({d.name, e.name, "MissingEmbeddingFile: no embedding file configured"});
      } else if (!fs::is_regular_file(it->second, ec)) {
        outcome.gaps.push_back({d.name, e.name, "MissingEmbeddingFile: " + it->second.string()});
      } else {
        pending.push_back({&d, &e, it->second, file});
      }
    }
  }
  if (opts.max_new && pending.size() > *opts.max_new) {
    outcome.pending = pending.size() - *opts.max_new;
    pending.resize(*opts.max_new);
  }

  // Corpora are shared read-only between the jobs of a dataset.
  std::map<std::string, Corpus> corpora;
  for (const auto& job : pending) {
    const auto& d = *job.dataset;
    if (corpora.count(d.name)) continue;
    const auto docs = load_documents(d.path, d.format ? *d.format : detect_format(d.path), d.load);
    corpora.emplace(d.name, build_corpus(docs, TokenizerConfig{}));
  }

  std::vector<std::optional<RunRecord>> results(pending.size());
  std::vector<std::exception_ptr> errors(pending.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      const auto& job = pending[i];
      try {
        const auto& corpus = corpora.at(job.dataset->name);
        const auto emb = load_embeddings(job.embedding);
        const auto result = run_pipeline(corpus, emb, cfg.pipeline);
        const auto scores = evaluate_topics(corpus, result.topics, cfg.eval);
        RunRecord rec;
        rec.dataset = job.dataset->name;
        rec.encoder = job.encoder->name;
        rec.params = job.encoder->params;
        rec.coherence = scores.coherence;
        rec.diversity = scores.diversity;
        rec.k = scores.k;
        rec.seed = cfg.seed;
        rec.timestamp = utc_timestamp();
        rec.validate();
        write_atomic(job.file, to_json(rec).dump() + "\n");
        results[i] = std::move(rec);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min(cfg.workers, std::max<std::size_t>(pending.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& r : results) {
    outcome.records.push_back(std::move(*r));
    ++outcome.computed;
  }

  std::stable_sort(outcome.records.begin(), outcome.records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.dataset, a.encoder) < std::tie(b.dataset, b.encoder);
  });
  std::ostringstream csv;
  write_records_csv(csv, outcome.records);
  write_atomic(cfg.output_dir / "records.csv", csv.str());

  std::ostringstream gaps;
  write_csv_row(gaps, {"dataset", "encoder", "reason"});
  for (const auto& g : outcome.gaps) write_csv_row(gaps, {g.dataset, g.encoder, g.reason});
  write_atomic(cfg.output_dir / "gaps.csv", gaps.str());

  std::string meta;
  for (const auto& r : outcome.records) {
    meta += json{{"dataset", r.dataset}, {"encoder", r.encoder}, {"timestamp", r.timestamp}}.dump() + "\n";
  }
  write_atomic(cfg.output_dir / "records.meta.jsonl", meta);
  return outcome;
}

}  // namespace topiceval::cli
