#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace loganom {

/// Timestamp with the original zone offset retained for display; the epoch
/// value is normalized to UTC.
struct Timestamp {
  std::int64_t epoch_seconds = 0;  // UTC
  int offset_minutes = 0;          // original zone offset
  std::string raw;                 // text as it appeared on the wire

  /// Seconds since local midnight in the record's own zone.
  int local_seconds_of_day() const {
    std::int64_t local = epoch_seconds + 60LL * offset_minutes;
    std::int64_t s = local % 86400;
    if (s < 0) s += 86400;
    return static_cast<int>(s);
  }

  bool operator==(const Timestamp& o) const {
    return epoch_seconds == o.epoch_seconds && offset_minutes == o.offset_minutes;
  }
};

/// Parse ISO-8601 text: "YYYY-MM-DDTHH:MM:SS" followed by "Z", "+HHMM",
/// "+HH:MM" (or "-"). Fractional seconds are accepted and ignored.
/// Throws InvalidTimestamp.
Timestamp parse_timestamp(const std::string& text);

/// Format a UTC epoch + offset back into "YYYY-MM-DDTHH:MM:SS+HHMM".
std::string format_timestamp(std::int64_t epoch_seconds, int offset_minutes);

/// One parsed listener-log event. Fields absent from the input line stay
/// empty optionals; unrecognized keys land in `extras` (key, value-as-JSON);
/// recognized keys that appeared more than once keep their shadowed values
/// in `duplicates` (last occurrence wins for the typed slot).
struct ConnectionRecord {
  std::optional<Timestamp> event_timestamp;
  std::optional<std::string> client_ip;
  std::optional<int> client_port;
  std::optional<std::string> client_user;
  std::optional<std::string> client_program;
  std::optional<std::string> client_host;
  std::optional<std::string> client_protocol;
  std::optional<std::string> hostname;
  std::optional<std::string> listener_name;
  std::optional<std::string> oracle_sid;
  std::optional<std::string> service_name;
  std::optional<std::string> connect_data_service_name;
  std::optional<std::string> connect_data_server;
  std::optional<std::string> database_type;
  std::optional<std::string> producer;
  std::optional<std::string> source_type;
  std::optional<std::string> type;
  std::optional<std::int64_t> return_code;
  std::optional<std::string> flume_agent_version;

  std::vector<std::pair<std::string, std::string>> extras;
  std::vector<std::pair<std::string, std::string>> duplicates;

  /// Equality covers typed fields and extras; `duplicates` is provenance
  /// metadata and does not participate (a serialized record reparses equal).
  bool operator==(const ConnectionRecord& o) const;
};

/// Serialize one record as a single-line JSON object in canonical field
/// order, extras last in their original order.
std::string serialize_record(const ConnectionRecord& rec);

}  // namespace loganom
