#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "topiceval/cli/records.hpp"

namespace topiceval::cli {

enum class ReportMetric { coherence, diversity };

struct EncoderSummary {
  std::string encoder;
  std::uint64_t params = 0;
  std::size_t count = 0;    // present entries
  std::size_t missing = 0;  // records with an empty cell
  std::optional<double> mean;
  std::optional<double> stddev;  // sample (n-1); 0 for a single entry
};

/// One row per encoder ordered by (params, encoder). Values are summed in
/// dataset order. Throws EmptyRecords, InvalidArgument (an encoder declared
/// with two parameter counts).
std::vector<EncoderSummary> summarize(const std::vector<RunRecord>& records, ReportMetric metric);

/// encoder,params,count,missing,mean,std
void write_summary_csv(std::ostream& out, const std::vector<EncoderSummary>& rows);
/// params,mean,std over encoders with at least one present entry.
void write_figure_csv(std::ostream& out, const std::vector<EncoderSummary>& rows);

}  // namespace topiceval::cli
