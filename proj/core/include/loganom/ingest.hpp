#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "loganom/record.hpp"

namespace loganom {

enum class ParseMode { Strict, Lenient };

struct IngestSummary {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  // (1-based line number, reason), capped at kMaxErrors entries.
  std::vector<std::pair<std::size_t, std::string>> first_errors;
  static constexpr std::size_t kMaxErrors = 20;
};

/// Parse one newline-delimited JSON record. In strict mode an object without
/// event_timestamp is rejected (MalformedRecord); lenient mode accepts any
/// parseable object, even `{}`.
/// Throws MalformedLine, MalformedRecord, FieldTypeError, InvalidTimestamp.
ConnectionRecord parse_record(const std::string& line,
                              ParseMode mode = ParseMode::Lenient);

struct IngestResult {
  std::vector<ConnectionRecord> records;
  IngestSummary summary;
};

/// Read NDJSON records from a stream. Blank lines are skipped and do not
/// count toward the summary. Strict mode rethrows the first parse error,
/// annotated with its line number; lenient mode tallies bad lines.
IngestResult read_log(std::istream& source, ParseMode mode);

/// Convenience wrapper: open and read a file ("-" means stdin is NOT handled
/// here; callers pass the stream overload for that). Throws IoFailure.
IngestResult read_log_file(const std::string& path, ParseMode mode);

}  // namespace loganom
