#include "topiceval/cli/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "topiceval/cli/csv.hpp"
#include "topiceval/error.hpp"

namespace fs = std::filesystem;

namespace topiceval::cli {

InputFormat parse_format(std::string_view name) {
  if (name == "dir") return InputFormat::dir;
  if (name == "csv") return InputFormat::csv;
  if (name == "jsonl") return InputFormat::jsonl;
  throw Error(ErrorCode::UnknownFormat, "unknown input format '" + std::string(name) + "'");
}

InputFormat detect_format(const fs::path& path) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) return InputFormat::dir;
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".csv") return InputFormat::csv;
  if (ext == ".jsonl" || ext == ".json") return InputFormat::jsonl;
  throw Error(ErrorCode::UnknownFormat, "cannot infer the input format of " + path.string());
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool hidden(const fs::path& rel) {
  for (const auto& part : rel) {
    const auto s = part.string();
    if (!s.empty() && s[0] == '.') return true;
  }
  return false;
}

std::vector<RawDocument> load_dir(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::UnreadableInput, root.string() + " is not a directory");
  std::vector<fs::path> files;
  for (fs::recursive_directory_iterator it(root, ec), end; it != end; it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file()) continue;
    auto rel = fs::relative(it->path(), root);
    if (!hidden(rel)) files.push_back(std::move(rel));
  }
  if (ec) throw Error(ErrorCode::UnreadableInput, "cannot list " + root.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  std::vector<RawDocument> docs;
  docs.reserve(files.size());
  for (const auto& rel : files) docs.push_back({rel.generic_string(), read_file(root / rel)});
  return docs;
}

std::vector<RawDocument> load_csv(const fs::path& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + path.string());
  const auto rows = read_csv(in);
  if (rows.empty()) throw Error(ErrorCode::MissingColumn, path.string() + " has no header row");
  const int text_col = column_index(rows[0], opts.text_column);
  if (text_col < 0) throw Error(ErrorCode::MissingColumn, "no column '" + opts.text_column + "' in " + path.string());
  const int id_col = column_index(rows[0], opts.id_column);
  std::vector<RawDocument> docs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != rows[0].size()) {
      throw Error(ErrorCode::UnreadableInput, path.string() + " row " + std::to_string(r + 1) + " has " +
                                                  std::to_string(row.size()) + " fields, header has " +
                                                  std::to_string(rows[0].size()));
    }
    std::string id = id_col >= 0 ? row[static_cast<std::size_t>(id_col)] : std::to_string(docs.size());
    docs.push_back({std::move(id), row[static_cast<std::size_t>(text_col)]});
  }
  return docs;
}

std::vector<RawDocument> load_jsonl(const fs::path& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + path.string());
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::UnreadableInput, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains(opts.text_column) || !j[opts.text_column].is_string()) {
      throw Error(ErrorCode::MissingColumn,
                  path.string() + ":" + std::to_string(lineno) + ": no string field '" + opts.text_column + "'");
    }
    std::string id;
    if (auto it = j.find(opts.id_column); it != j.end() && (it->is_string() || it->is_number())) {
      id = it->is_string() ? it->get<std::string>() : it->dump();
    } else {
      id = std::to_string(docs.size());
    }
    docs.push_back({std::move(id), j[opts.text_column].get<std::string>()});
  }
  return docs;
}

}  // namespace

std::vector<RawDocument> load_documents(const fs::path& path, InputFormat format, const LoadOptions& opts) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::UnreadableInput, path.string() + " does not exist");
  switch (format) {
    case InputFormat::dir: return load_dir(path);
    case InputFormat::csv: return load_csv(path, opts);
    case InputFormat::jsonl: return load_jsonl(path, opts);
  }
  throw Error(ErrorCode::UnknownFormat, "unknown input format");
}

}  // namespace topiceval::cli
