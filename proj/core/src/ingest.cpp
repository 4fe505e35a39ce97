#include "loganom/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>

#include "loganom/errors.hpp"

namespace loganom {
namespace {

using json = nlohmann::ordered_json;

// SAX handler that keeps every top-level (key, value) pair in order, so that
// duplicate keys survive the parse (the DOM API would silently drop them).
class TopLevelCollector : public nlohmann::json_sax<json> {
 public:
  std::vector<std::pair<std::string, json>> entries;

  bool null() override { return value(nullptr); }
  bool boolean(bool v) override { return value(v); }
  bool number_integer(number_integer_t v) override { return value(v); }
  bool number_unsigned(number_unsigned_t v) override { return value(v); }
  bool number_float(number_float_t v, const string_t&) override { return value(v); }
  bool string(string_t& v) override { return value(v); }
  bool binary(binary_t& v) override { return value(json::binary(v)); }

  bool start_object(std::size_t) override {
    if (depth_ == 0) {
      ++depth_;
      return true;
    }
    open(json::object());
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override {
    if (depth_ == 0) return fail("top level is not an object");
    open(json::array());
    return true;
  }
  bool end_array() override { return close(); }

  bool key(string_t& k) override {
    if (depth_ == 1) {
      pending_key_ = k;
    } else {
      keys_.back() = k;
    }
    return true;
  }

  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    error = ex.what();
    return false;
  }

  std::string error;

 private:
  bool fail(const std::string& msg) {
    error = msg;
    return false;
  }

  void open(json container) {
    stack_.push_back(std::move(container));
    keys_.emplace_back();
    ++depth_;
  }

  bool close() {
    if (depth_ == 1) {
      --depth_;  // root object done
      return true;
    }
    json v = std::move(stack_.back());
    stack_.pop_back();
    keys_.pop_back();
    --depth_;
    return value(std::move(v));
  }

  bool value(json v) {
    if (depth_ == 0) return fail("top level is not an object");
    if (depth_ == 1) {
      entries.emplace_back(pending_key_, std::move(v));
    } else {
      json& parent = stack_.back();
      if (parent.is_array()) {
        parent.push_back(std::move(v));
      } else {
        parent[keys_.back()] = std::move(v);
      }
    }
    return true;
  }

  int depth_ = 0;
  std::string pending_key_;
  std::vector<json> stack_;
  std::vector<std::string> keys_;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string as_text(const std::string& field, const json& v) {
  if (!v.is_string()) throw FieldTypeError(field, "expected text, got " + v.dump());
  return v.get<std::string>();
}

std::int64_t as_integer(const std::string& field, const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    // Numeric strings occur in real logs; accept them when fully numeric.
    const std::string& s = v.get<std::string>();
    std::size_t pos = 0;
    try {
      const long long parsed = std::stoll(s, &pos);
      if (pos == s.size()) return parsed;
    } catch (const std::exception&) {
    }
  }
  throw FieldTypeError(field, "expected integer, got " + v.dump());
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

ConnectionRecord parse_record(const std::string& line, ParseMode mode) {
  TopLevelCollector collector;
  if (!json::sax_parse(line, &collector) || !collector.error.empty()) {
    throw MalformedLine("not a JSON object: " +
                        (collector.error.empty() ? line : collector.error));
  }

  ConnectionRecord rec;
  auto text_slot = [&rec](const std::string& key) -> std::optional<std::string>* {
    if (key == "client_ip") return &rec.client_ip;
    if (key == "client_user") return &rec.client_user;
    if (key == "client_program") return &rec.client_program;
    if (key == "client_host") return &rec.client_host;
    if (key == "client_protocol") return &rec.client_protocol;
    if (key == "hostname") return &rec.hostname;
    if (key == "listener_name") return &rec.listener_name;
    if (key == "oracle_sid") return &rec.oracle_sid;
    if (key == "service_name") return &rec.service_name;
    if (key == "connect_data_service_name") return &rec.connect_data_service_name;
    if (key == "connect_data_server") return &rec.connect_data_server;
    if (key == "database_type") return &rec.database_type;
    if (key == "producer") return &rec.producer;
    if (key == "source_type") return &rec.source_type;
    if (key == "type") return &rec.type;
    if (key == "flume_agent_version") return &rec.flume_agent_version;
    return nullptr;
  };

  for (const auto& [raw_key, value] : collector.entries) {
    const std::string key = lower(raw_key);
    if (key == "event_timestamp") {
      if (rec.event_timestamp)
        rec.duplicates.emplace_back(raw_key, rec.event_timestamp->raw);
      rec.event_timestamp = parse_timestamp(as_text(key, value));
    } else if (key == "client_port") {
      if (rec.client_port)
        rec.duplicates.emplace_back(raw_key, std::to_string(*rec.client_port));
      const std::int64_t port = as_integer(key, value);
      if (port < 0 || port > 65535)
        throw FieldTypeError("client_port", "out of range [0, 65535]: " +
                                                std::to_string(port));
      rec.client_port = static_cast<int>(port);
    } else if (key == "return_code") {
      if (rec.return_code)
        rec.duplicates.emplace_back(raw_key, std::to_string(*rec.return_code));
      rec.return_code = as_integer(key, value);
    } else if (auto* slot = text_slot(key)) {
      if (*slot) rec.duplicates.emplace_back(raw_key, **slot);
      *slot = as_text(key, value);
    } else {
      // Unknown field: preserved verbatim, last occurrence wins.
      auto it = std::find_if(rec.extras.begin(), rec.extras.end(),
                             [&](const auto& e) { return e.first == raw_key; });
      if (it != rec.extras.end()) {
        rec.duplicates.emplace_back(raw_key, it->second);
        rec.extras.erase(it);
      }
      rec.extras.emplace_back(raw_key, value.dump());
    }
  }

  if (mode == ParseMode::Strict && !rec.event_timestamp) {
    throw MalformedRecord("strict mode requires event_timestamp");
  }
  return rec;
}

IngestResult read_log(std::istream& source, ParseMode mode) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    try {
      result.records.push_back(parse_record(line, mode));
      ++result.summary.accepted;
    } catch (const Error& err) {
      if (mode == ParseMode::Strict) {
        throw MalformedLine("line " + std::to_string(line_no) + ": " + err.what());
      }
      ++result.summary.rejected;
      if (result.summary.first_errors.size() < IngestSummary::kMaxErrors) {
        result.summary.first_errors.emplace_back(line_no, err.what());
      }
    }
  }
  if (source.bad()) throw IoFailure("stream read failed");
  return result;
}

IngestResult read_log_file(const std::string& path, ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path);
  return read_log(in, mode);
}

}  // namespace loganom
