#include "topiceval/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "topiceval/cli/csv.hpp"
#include "topiceval/error.hpp"

namespace topiceval::cli {

std::vector<EncoderSummary> summarize(const std::vector<RunRecord>& records, ReportMetric metric) {
  if (records.empty()) throw Error(ErrorCode::EmptyRecords, "no records to report");
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const RunRecord* a, const RunRecord* b) {
    return std::tie(a->encoder, a->dataset) < std::tie(b->encoder, b->dataset);
  });

  std::map<std::string, EncoderSummary> by_encoder;
  std::map<std::string, std::vector<double>> values;
  for (const auto* r : sorted) {
    auto [it, inserted] = by_encoder.try_emplace(r->encoder);
    auto& s = it->second;
    if (inserted) {
      s.encoder = r->encoder;
      s.params = r->params;
    } else if (s.params != r->params) {
      throw Error(ErrorCode::InvalidArgument, "encoder " + r->encoder + " is declared with two parameter counts");
    }
    const auto& v = metric == ReportMetric::coherence ? r->coherence : r->diversity;
    if (v) {
      values[r->encoder].push_back(*v);
    } else {
      ++s.missing;
    }
  }

  std::vector<EncoderSummary> out;
  for (auto& [name, s] : by_encoder) {
    const auto& xs = values[name];
    s.count = xs.size();
    if (!xs.empty()) {
      double sum = 0.0;
      for (const double x : xs) sum += x;
      const double mean = sum / static_cast<double>(xs.size());
      double ss = 0.0;
      for (const double x : xs) ss += (x - mean) * (x - mean);
      s.mean = mean;
      s.stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const EncoderSummary& a, const EncoderSummary& b) {
    return std::tie(a.params, a.encoder) < std::tie(b.params, b.encoder);
  });
  return out;
}

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<EncoderSummary>& rows) {
  write_csv_row(out, {"encoder", "params", "count", "missing", "mean", "std"});
  for (const auto& r : rows) {
    write_csv_row(out, {r.encoder, std::to_string(r.params), std::to_string(r.count), std::to_string(r.missing),
                        opt_number(r.mean), opt_number(r.stddev)});
  }
}

void write_figure_csv(std::ostream& out, const std::vector<EncoderSummary>& rows) {
  write_csv_row(out, {"params", "mean", "std"});
  for (const auto& r : rows) {
    if (!r.mean) continue;
    write_csv_row(out, {std::to_string(r.params), format_number(*r.mean), format_number(*r.stddev)});
  }
}

}  // namespace topiceval::cli
