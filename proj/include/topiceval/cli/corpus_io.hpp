#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "topiceval/textprep.hpp"

namespace topiceval::cli {

enum class InputFormat { dir, csv, jsonl };

/// "dir", "csv" or "jsonl". Throws UnknownFormat.
InputFormat parse_format(std::string_view name);
/// Directory -> dir, *.csv -> csv, *.jsonl / *.json -> jsonl. Throws UnknownFormat.
InputFormat detect_format(const std::filesystem::path& path);

struct LoadOptions {
  std::string text_column = "text";
  std::string id_column = "id";  // optional in the input; row numbers otherwise
};

/// Text folder: every regular, non-hidden file below `path` in sorted
/// relative-path order, the relative path being the id.
/// CSV: header row with the text column (MissingColumn otherwise).
/// JSON lines: one object per non-blank line with the text field.
/// Throws UnreadableInput, UnknownFormat, MissingColumn.
std::vector<RawDocument> load_documents(const std::filesystem::path& path, InputFormat format,
                                        const LoadOptions& opts = {});

}  // namespace topiceval::cli
