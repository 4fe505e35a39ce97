#include "loganom/record.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdio>

#include "loganom/errors.hpp"

namespace loganom {
namespace {

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

int days_in_month(int y, int m) {
  static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[m - 1];
}

bool all_digits(const char* p, int n) {
  for (int i = 0; i < n; ++i)
    if (!std::isdigit(static_cast<unsigned char>(p[i]))) return false;
  return true;
}

int parse_fixed(const char* p, int n) {
  int v = 0;
  for (int i = 0; i < n; ++i) v = v * 10 + (p[i] - '0');
  return v;
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
  const char* s = text.c_str();
  const std::size_t len = text.size();
  // Minimum: YYYY-MM-DDTHH:MM:SS + zone designator
  if (len < 20 || !all_digits(s, 4) || s[4] != '-' || !all_digits(s + 5, 2) ||
      s[7] != '-' || !all_digits(s + 8, 2) || (s[10] != 'T' && s[10] != ' ') ||
      !all_digits(s + 11, 2) || s[13] != ':' || !all_digits(s + 14, 2) ||
      s[16] != ':' || !all_digits(s + 17, 2)) {
    throw InvalidTimestamp("not an ISO-8601 timestamp: " + text);
  }
  const int year = parse_fixed(s, 4);
  const int month = parse_fixed(s + 5, 2);
  const int day = parse_fixed(s + 8, 2);
  const int hour = parse_fixed(s + 11, 2);
  const int minute = parse_fixed(s + 14, 2);
  const int second = parse_fixed(s + 17, 2);
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
      hour > 23 || minute > 59 || second > 60) {
    throw InvalidTimestamp("field out of range: " + text);
  }

  std::size_t pos = 19;
  if (pos < len && s[pos] == '.') {  // fractional seconds: accepted, ignored
    ++pos;
    std::size_t start = pos;
    while (pos < len && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw InvalidTimestamp("empty fraction: " + text);
  }

  int offset_minutes = 0;
  if (pos < len && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < len && (s[pos] == '+' || s[pos] == '-')) {
    const int sign = s[pos] == '-' ? -1 : 1;
    ++pos;
    if (pos + 2 > len || !all_digits(s + pos, 2))
      throw InvalidTimestamp("bad zone offset: " + text);
    const int oh = parse_fixed(s + pos, 2);
    pos += 2;
    if (pos < len && s[pos] == ':') ++pos;
    if (pos + 2 > len || !all_digits(s + pos, 2))
      throw InvalidTimestamp("bad zone offset: " + text);
    const int om = parse_fixed(s + pos, 2);
    pos += 2;
    if (oh > 18 || om > 59) throw InvalidTimestamp("zone offset out of range: " + text);
    offset_minutes = sign * (oh * 60 + om);
  } else {
    throw InvalidTimestamp("missing zone designator: " + text);
  }
  if (pos != len) throw InvalidTimestamp("trailing characters: " + text);

  Timestamp ts;
  ts.epoch_seconds = days_from_civil(year, month, day) * 86400LL + hour * 3600LL +
                     minute * 60LL + second - 60LL * offset_minutes;
  ts.offset_minutes = offset_minutes;
  ts.raw = text;
  return ts;
}

std::string format_timestamp(std::int64_t epoch_seconds, int offset_minutes) {
  const std::int64_t local = epoch_seconds + 60LL * offset_minutes;
  std::int64_t days = local / 86400;
  std::int64_t sod = local % 86400;
  if (sod < 0) {
    sod += 86400;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  const int abs_off = offset_minutes < 0 ? -offset_minutes : offset_minutes;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d%c%02d%02d", y, m,
                d, static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                static_cast<int>(sod % 60), offset_minutes < 0 ? '-' : '+',
                abs_off / 60, abs_off % 60);
  return buf;
}

bool ConnectionRecord::operator==(const ConnectionRecord& o) const {
  return event_timestamp == o.event_timestamp && client_ip == o.client_ip &&
         client_port == o.client_port && client_user == o.client_user &&
         client_program == o.client_program && client_host == o.client_host &&
         client_protocol == o.client_protocol && hostname == o.hostname &&
         listener_name == o.listener_name && oracle_sid == o.oracle_sid &&
         service_name == o.service_name &&
         connect_data_service_name == o.connect_data_service_name &&
         connect_data_server == o.connect_data_server &&
         database_type == o.database_type && producer == o.producer &&
         source_type == o.source_type && type == o.type &&
         return_code == o.return_code &&
         flume_agent_version == o.flume_agent_version && extras == o.extras;
}

std::string serialize_record(const ConnectionRecord& rec) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
  };
  put("oracle_sid", rec.oracle_sid);
  put("listener_name", rec.listener_name);
  put("database_type", rec.database_type);
  put("producer", rec.producer);
  put("source_type", rec.source_type);
  put("hostname", rec.hostname);
  put("flume_agent_version", rec.flume_agent_version);
  if (rec.event_timestamp) j["event_timestamp"] = rec.event_timestamp->raw;
  put("connect_data_server", rec.connect_data_server);
  put("connect_data_service_name", rec.connect_data_service_name);
  put("client_program", rec.client_program);
  put("client_host", rec.client_host);
  put("client_user", rec.client_user);
  put("client_protocol", rec.client_protocol);
  put("client_ip", rec.client_ip);
  if (rec.client_port) j["client_port"] = *rec.client_port;
  put("type", rec.type);
  put("service_name", rec.service_name);
  if (rec.return_code) j["return_code"] = *rec.return_code;
  for (const auto& [key, value] : rec.extras) {
    j[key] = nlohmann::ordered_json::parse(value);
  }
  return j.dump();
}

}  // namespace loganom
