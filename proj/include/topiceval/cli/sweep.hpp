#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topiceval/cli/corpus_io.hpp"
#include "topiceval/cli/evaluation.hpp"
#include "topiceval/cli/records.hpp"
#include "topiceval/pipeline.hpp"

namespace topiceval::cli {

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  std::optional<InputFormat> format;
  LoadOptions load;
  std::map<std::string, std::filesystem::path> embeddings;  // encoder -> EMB1 file
};

struct EncoderSpec {
  std::string name;
  std::uint64_t params = 0;
};

struct SweepConfig {
  std::filesystem::path output_dir;
  std::size_t workers = 1;
  std::uint64_t seed = 42;
  PipelineConfig pipeline;
  EvalSettings eval;
  std::vector<DatasetSpec> datasets;  // sorted by name
  std::vector<EncoderSpec> encoders;  // sorted by name
};

/// Parses the TOML schema documented in the README. Relative paths resolve
/// against the config file's directory. Throws UnreadableInput, BadConfig.
SweepConfig load_sweep_config(const std::filesystem::path& path, std::optional<std::uint64_t> default_seed = {});

struct SweepGap {
  std::string dataset;
  std::string encoder;
  std::string reason;
};

struct SweepOutcome {
  std::vector<RunRecord> records;  // all completed, sorted by (dataset, encoder)
  std::vector<SweepGap> gaps;
  std::size_t skipped = 0;  // already present from an earlier run
  std::size_t computed = 0;
  std::size_t pending = 0;  // left undone because of max_new
};

struct SweepOptions {
  std::optional<std::size_t> max_new;  // stop after this many new records
};

/// Runs every (dataset, encoder) pair with a bounded worker pool. Each record
/// is written atomically to <output_dir>/records/ and reused on rerun. Writes
/// records.csv, gaps.csv and records.meta.jsonl into output_dir.
SweepOutcome run_sweep(const SweepConfig& cfg, const SweepOptions& opts = {});

}  // namespace topiceval::cli
