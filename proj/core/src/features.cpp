#include "loganom/features.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

#include "loganom/errors.hpp"

namespace loganom {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Field accessors used by the encoders. Absent values are surfaced as empty
// optionals; the encoder decides the neutral value.
std::optional<std::string> text_field(const ConnectionRecord& r,
                                      const std::string& field) {
  if (field == "client_user") return r.client_user;
  if (field == "client_program") return r.client_program;
  if (field == "client_host") return r.client_host;
  if (field == "client_protocol") return r.client_protocol;
  if (field == "client_ip") return r.client_ip;
  if (field == "hostname") return r.hostname;
  if (field == "listener_name") return r.listener_name;
  if (field == "oracle_sid") return r.oracle_sid;
  if (field == "service_name") return r.service_name;
  if (field == "connect_data_service_name") return r.connect_data_service_name;
  if (field == "connect_data_server") return r.connect_data_server;
  if (field == "database_type") return r.database_type;
  if (field == "producer") return r.producer;
  if (field == "source_type") return r.source_type;
  if (field == "type") return r.type;
  if (field == "flume_agent_version") return r.flume_agent_version;
  throw UnknownSourceField("no text field named " + field);
}

std::optional<double> numeric_field(const ConnectionRecord& r,
                                    const std::string& field) {
  if (field == "client_port") {
    if (r.client_port) return static_cast<double>(*r.client_port);
    return std::nullopt;
  }
  if (field == "return_code") {
    if (r.return_code) return static_cast<double>(*r.return_code);
    return std::nullopt;
  }
  throw UnknownSourceField("no numeric field named " + field);
}

}  // namespace

FeatureSpec FeatureSpec::defaults() {
  FeatureSpec spec;
  spec.features = {
      {"hour", "event_timestamp", EncoderKind::CyclicalTime},
      {"client_port", "client_port", EncoderKind::NumericPassthrough},
      {"privileged_port", "client_port", EncoderKind::BinaryIndicator,
       IndicatorPredicate::LessThan, "", 1024.0},
      {"return_code_nonzero", "return_code", EncoderKind::BinaryIndicator,
       IndicatorPredicate::Nonzero},
      {"client_user_freq", "client_user", EncoderKind::Frequency},
      {"client_program_freq", "client_program", EncoderKind::Frequency},
      {"client_host_freq", "client_host", EncoderKind::Frequency},
      {"service_name_freq", "service_name", EncoderKind::Frequency},
      {"establish", "type", EncoderKind::BinaryIndicator,
       IndicatorPredicate::Equals, "establish"},
  };
  return spec;
}

FeatureMatrix build_features(const std::vector<ConnectionRecord>& records,
                             const FeatureSpec& spec) {
  if (records.empty()) throw EmptyInput("no records to encode");
  if (spec.features.empty()) throw ConfigInvalid("feature spec is empty");
  {
    std::set<std::string> names;
    for (const auto& f : spec.features)
      if (!names.insert(f.name).second)
        throw ConfigInvalid("duplicate feature name: " + f.name);
  }

  const std::size_t n = records.size();
  FeatureMatrix out;
  std::vector<std::vector<double>> columns;

  for (const auto& def : spec.features) {
    switch (def.encoder) {
      case EncoderKind::CyclicalTime: {
        if (def.source_field != "event_timestamp")
          throw UnknownSourceField("cyclical-time needs event_timestamp, got " +
                                   def.source_field);
        std::vector<double> sins(n), coss(n);
        for (std::size_t i = 0; i < n; ++i) {
          // Local wall-clock seconds: off-hours activity should look
          // off-hours regardless of the zone the log was written in.
          const double sod = records[i].event_timestamp
                                 ? records[i].event_timestamp->local_seconds_of_day()
                                 : 0.0;
          const double angle = kTwoPi * sod / 86400.0;
          sins[i] = std::sin(angle);
          coss[i] = std::cos(angle);
        }
        out.column_names.push_back(def.name + "_sin");
        columns.push_back(std::move(sins));
        out.column_names.push_back(def.name + "_cos");
        columns.push_back(std::move(coss));
        break;
      }
      case EncoderKind::Frequency: {
        std::unordered_map<std::string, double> counts;
        std::vector<std::string> values(n);
        for (std::size_t i = 0; i < n; ++i) {
          values[i] = text_field(records[i], def.source_field).value_or("");
          counts[values[i]] += 1.0;
        }
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
          col[i] = counts[values[i]] / static_cast<double>(n);
        out.column_names.push_back(def.name);
        columns.push_back(std::move(col));
        break;
      }
      case EncoderKind::NumericPassthrough: {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
          col[i] = numeric_field(records[i], def.source_field).value_or(0.0);
        out.column_names.push_back(def.name);
        columns.push_back(std::move(col));
        break;
      }
      case EncoderKind::BinaryIndicator: {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
          bool hit = false;
          switch (def.predicate) {
            case IndicatorPredicate::Equals:
              hit = text_field(records[i], def.source_field) == def.param_text;
              break;
            case IndicatorPredicate::Nonzero: {
              const auto v = numeric_field(records[i], def.source_field);
              hit = v && *v != 0.0;
              break;
            }
            case IndicatorPredicate::LessThan: {
              const auto v = numeric_field(records[i], def.source_field);
              hit = v && *v < def.param_number;
              break;
            }
          }
          col[i] = hit ? 1.0 : 0.0;
        }
        out.column_names.push_back(def.name);
        columns.push_back(std::move(col));
        break;
      }
    }
  }

  const std::size_t d = columns.size();
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < n; ++i)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          columns[j][i];

  if (!out.values.allFinite())
    throw ConfigInvalid("feature matrix contains non-finite values");
  return out;
}

FeatureMatrix standardize(const FeatureMatrix& matrix) {
  const Eigen::Index n = matrix.rows(), d = matrix.cols();
  if (n < 2) throw TooFewRows("standardize needs at least 2 rows");

  FeatureMatrix out;
  out.column_names = matrix.column_names;
  out.values.resize(n, d);
  out.standardization.resize(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = matrix.values.col(j).mean();
    const double var =
        (matrix.values.col(j).array() - mean).square().sum() / static_cast<double>(n);
    const double stddev = std::sqrt(var);
    ColumnStats& st = out.standardization[static_cast<std::size_t>(j)];
    st.mean = mean;
    st.stddev = stddev;
    st.zero_variance = stddev == 0.0;
    if (st.zero_variance) {
      out.values.col(j).setZero();
    } else {
      out.values.col(j) = (matrix.values.col(j).array() - mean) / stddev;
    }
  }
  return out;
}

FeatureMatrix apply_standardization(const FeatureMatrix& matrix,
                                    const std::vector<ColumnStats>& stats) {
  if (static_cast<Eigen::Index>(stats.size()) != matrix.cols())
    throw LengthMismatch("standardization stats do not match column count");
  FeatureMatrix out;
  out.column_names = matrix.column_names;
  out.standardization = stats;
  out.values.resize(matrix.rows(), matrix.cols());
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    const ColumnStats& st = stats[static_cast<std::size_t>(j)];
    if (st.zero_variance) {
      out.values.col(j).setZero();
    } else {
      out.values.col(j) = (matrix.values.col(j).array() - st.mean) / st.stddev;
    }
  }
  return out;
}

}  // namespace loganom
