#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "loganom/record.hpp"

namespace loganom {

using Matrix = Eigen::MatrixXd;

enum class EncoderKind {
  CyclicalTime,        // event_timestamp -> (sin, cos) of local time of day
  Frequency,           // batch frequency of the field value, count / n
  NumericPassthrough,  // numeric field as-is (absent -> 0)
  BinaryIndicator,     // predicate on the field value -> {0, 1}
};

enum class IndicatorPredicate {
  Equals,    // text value == param_text
  Nonzero,   // numeric value != 0
  LessThan,  // numeric value < param_number
};

struct FeatureDef {
  std::string name;          // output column name; unique within a spec
  std::string source_field;  // ConnectionRecord field name
  EncoderKind encoder;
  IndicatorPredicate predicate = IndicatorPredicate::Equals;
  std::string param_text;
  double param_number = 0.0;
};

struct FeatureSpec {
  std::vector<FeatureDef> features;

  /// The default encoding: cyclical hour-of-day, port numeric + privileged
  /// indicator, return-code nonzero indicator, frequency encodings for user /
  /// program / host / service, and an `establish` event-kind indicator.
  static FeatureSpec defaults();
};

struct ColumnStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  bool zero_variance = false;
};

struct FeatureMatrix {
  Matrix values;  // n x d
  std::vector<std::string> column_names;
  // Present after standardize(); one entry per column.
  std::vector<ColumnStats> standardization;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  bool standardized() const { return !standardization.empty(); }
};

/// Encode a batch of records into a numeric matrix. A CyclicalTime feature
/// emits two columns (<name>_sin, <name>_cos); every other encoder emits one.
/// Throws EmptyInput, UnknownSourceField, ConfigInvalid (bad spec).
FeatureMatrix build_features(const std::vector<ConnectionRecord>& records,
                             const FeatureSpec& spec = FeatureSpec::defaults());

/// Center and scale each column by its population mean/stddev. Zero-variance
/// columns map to all-zeros and are flagged. Throws TooFewRows (< 2 rows).
FeatureMatrix standardize(const FeatureMatrix& matrix);

/// Apply previously-computed standardization stats to held-out rows.
FeatureMatrix apply_standardization(const FeatureMatrix& matrix,
                                    const std::vector<ColumnStats>& stats);

}  // namespace loganom
