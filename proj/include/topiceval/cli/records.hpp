#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace topiceval::cli {

struct RunRecord {
  std::string dataset;
  std::string encoder;
  std::uint64_t params = 0;  // declared parameter count
  std::optional<double> coherence;
  std::optional<double> diversity;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::string timestamp;  // ISO-8601 UTC; kept out of the CSV

  /// Throws InvalidArgument unless coherence in [-1,1], diversity in [0,1]
  /// and params > 0.
  void validate() const;
};

/// Columns: dataset,encoder,params,coherence,diversity,k,seed. Records are
/// stable-sorted by (dataset, encoder); missing values are empty cells.
void write_records_csv(std::ostream& out, std::vector<RunRecord> records);

/// Requires dataset, encoder, params and coherence columns (MissingColumn);
/// diversity, k and seed are optional.
std::vector<RunRecord> read_records_csv(std::istream& in);

nlohmann::json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

std::string utc_timestamp();

}  // namespace topiceval::cli
