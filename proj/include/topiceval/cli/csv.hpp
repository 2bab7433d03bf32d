#pragma once

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topiceval::cli {

using CsvRow = std::vector<std::string>;

/// RFC-4180 reader: quoted fields, doubled quotes, embedded line breaks, CRLF
/// or LF record ends. Throws UnreadableInput on an unterminated quote.
std::vector<CsvRow> read_csv(std::istream& in);

/// Writes one record with CRLF, quoting fields that need it.
void write_csv_row(std::ostream& out, std::span<const std::string> fields);
void write_csv_row(std::ostream& out, std::initializer_list<std::string> fields);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

/// Index of `name` in a header row, or -1.
int column_index(const CsvRow& header, std::string_view name);

}  // namespace topiceval::cli
