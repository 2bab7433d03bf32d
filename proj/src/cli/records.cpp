#include "topiceval/cli/records.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "topiceval/cli/csv.hpp"
#include "topiceval/error.hpp"

using nlohmann::json;

namespace topiceval::cli {

void RunRecord::validate() const {
  if (dataset.empty() || encoder.empty()) throw Error(ErrorCode::InvalidArgument, "record needs a dataset and an encoder");
  if (params == 0) throw Error(ErrorCode::InvalidArgument, "record " + dataset + "/" + encoder + " has params 0");
  if (coherence && !(*coherence >= -1.0 && *coherence <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "record " + dataset + "/" + encoder + " coherence outside [-1, 1]");
  }
  if (diversity && !(*diversity >= 0.0 && *diversity <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "record " + dataset + "/" + encoder + " diversity outside [0, 1]");
  }
}

namespace {

template <typename T>
std::string cell(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
T parse_cell(const std::string& s, std::string_view column, std::size_t row) {
  T value{};
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("records row {}: '{}' is not a valid {} value", row, s, column));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteValue, fmt::format("records row {}: {} is not finite", row, column));
  }
  return value;
}

template <typename T>
std::optional<T> optional_cell(const CsvRow& row, int col, std::string_view column, std::size_t r) {
  if (col < 0) return std::nullopt;
  const auto& s = row[static_cast<std::size_t>(col)];
  if (s.empty()) return std::nullopt;
  return parse_cell<T>(s, column, r);
}

}  // namespace

void write_records_csv(std::ostream& out, std::vector<RunRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.dataset, a.encoder) < std::tie(b.dataset, b.encoder);
  });
  write_csv_row(out, {"dataset", "encoder", "params", "coherence", "diversity", "k", "seed"});
  for (const auto& r : records) {
    write_csv_row(out, {r.dataset, r.encoder, std::to_string(r.params), cell(r.coherence), cell(r.diversity),
                        cell(r.k), cell(r.seed)});
  }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw Error(ErrorCode::EmptyRecords, "records file is empty");
  const auto& header = rows[0];
  const auto require = [&](std::string_view name) {
    const int col = column_index(header, name);
    if (col < 0) throw Error(ErrorCode::MissingColumn, "records file has no '" + std::string(name) + "' column");
    return col;
  };
  const int c_dataset = require("dataset");
  const int c_encoder = require("encoder");
  const int c_params = require("params");
  const int c_coherence = require("coherence");
  const int c_diversity = column_index(header, "diversity");
  const int c_k = column_index(header, "k");
  const int c_seed = column_index(header, "seed");
  const int c_timestamp = column_index(header, "timestamp");

  std::vector<RunRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("records row {} has {} fields, header has {}", r + 1,
                                                          row.size(), header.size()));
    }
    RunRecord rec;
    rec.dataset = row[static_cast<std::size_t>(c_dataset)];
    rec.encoder = row[static_cast<std::size_t>(c_encoder)];
    rec.params = parse_cell<std::uint64_t>(row[static_cast<std::size_t>(c_params)], "params", r + 1);
    rec.coherence = optional_cell<double>(row, c_coherence, "coherence", r + 1);
    rec.diversity = optional_cell<double>(row, c_diversity, "diversity", r + 1);
    rec.k = optional_cell<std::size_t>(row, c_k, "k", r + 1);
    rec.seed = optional_cell<std::uint64_t>(row, c_seed, "seed", r + 1);
    if (c_timestamp >= 0) rec.timestamp = row[static_cast<std::size_t>(c_timestamp)];
    rec.validate();
    records.push_back(std::move(rec));
  }
  return records;
}

json to_json(const RunRecord& r) {
  const auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  return {{"dataset", r.dataset},     {"encoder", r.encoder}, {"params", r.params},
          {"coherence", opt(r.coherence)}, {"diversity", opt(r.diversity)}, {"k", opt(r.k)},
          {"seed", opt(r.seed)},      {"timestamp", r.timestamp}};
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  try {
    r.dataset = j.at("dataset").get<std::string>();
    r.encoder = j.at("encoder").get<std::string>();
    r.params = j.at("params").get<std::uint64_t>();
    if (!j.at("coherence").is_null()) r.coherence = j["coherence"].get<double>();
    if (!j.at("diversity").is_null()) r.diversity = j["diversity"].get<double>();
    if (!j.at("k").is_null()) r.k = j["k"].get<std::size_t>();
    if (!j.at("seed").is_null()) r.seed = j["seed"].get<std::uint64_t>();
    r.timestamp = j.value("timestamp", std::string{});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadHeader, std::string("malformed record: ") + e.what());
  }
  r.validate();
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

}  // namespace topiceval::cli
