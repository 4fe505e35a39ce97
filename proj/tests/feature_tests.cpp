#include <cmath>

#include "doctest.h"
#include "loganom/errors.hpp"
#include "loganom/features.hpp"
#include "loganom/ingest.hpp"

using namespace loganom;

namespace {

ConnectionRecord at(const std::string& iso) {
  ConnectionRecord rec;
  rec.event_timestamp = parse_timestamp(iso);
  return rec;
}

int column(const FeatureMatrix& m, const std::string& name) {
  for (std::size_t i = 0; i < m.column_names.size(); ++i)
    if (m.column_names[i] == name) return static_cast<int>(i);
  FAIL("no column named ", name);
  return -1;
}

}  // namespace

TEST_CASE("default spec produces the documented ten columns") {
  const FeatureMatrix m = build_features({at("2017-09-27T04:45:27+0200")});
  CHECK(m.cols() == 10);
  // One record, all encoders defined: no NaNs anywhere.
  CHECK(m.values.allFinite());
  CHECK(column(m, "hour_sin") >= 0);
  CHECK(column(m, "hour_cos") >= 0);
  CHECK(column(m, "client_port") >= 0);
  CHECK(column(m, "privileged_port") >= 0);
  CHECK(column(m, "return_code_nonzero") >= 0);
  CHECK(column(m, "client_user_freq") >= 0);
  CHECK(column(m, "client_program_freq") >= 0);
  CHECK(column(m, "client_host_freq") >= 0);
  CHECK(column(m, "service_name_freq") >= 0);
  CHECK(column(m, "establish") >= 0);
}

TEST_CASE("cyclical hour encoding uses local wall-clock time") {
  // 04:45:27 local = 17127 s; angle = 2*pi * 17127/86400.
  const FeatureMatrix m = build_features({at("2017-09-27T04:45:27+0200")});
  const double angle = 2.0 * M_PI * 17127.0 / 86400.0;
  CHECK(m.values(0, column(m, "hour_sin")) == doctest::Approx(std::sin(angle)).epsilon(1e-12));
  CHECK(m.values(0, column(m, "hour_cos")) == doctest::Approx(std::cos(angle)).epsilon(1e-12));
  CHECK(m.values(0, column(m, "hour_sin")) == doctest::Approx(0.9478).epsilon(1e-3));
  CHECK(m.values(0, column(m, "hour_cos")) == doctest::Approx(0.3191).epsilon(1e-3));

  // Midnight maps to (sin, cos) = (0, 1) regardless of zone.
  const FeatureMatrix mid = build_features({at("2017-09-27T00:00:00+0200")});
  CHECK(mid.values(0, column(mid, "hour_sin")) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mid.values(0, column(mid, "hour_cos")) == doctest::Approx(1.0).epsilon(1e-12));

  // The same instant in two zones encodes differently: it is wall time,
  // not UTC, that models working hours.
  const FeatureMatrix utc = build_features({at("2017-09-27T02:45:27Z")});
  CHECK(utc.values(0, column(utc, "hour_sin")) !=
        doctest::Approx(m.values(0, column(m, "hour_sin"))).epsilon(1e-6));
}

TEST_CASE("frequency encoding is count over batch size") {
  std::vector<ConnectionRecord> recs(4, at("2017-09-27T12:00:00Z"));
  recs[0].client_user = "alice";
  recs[1].client_user = "alice";
  recs[2].client_user = "alice";
  recs[3].client_user = "bob";
  const FeatureMatrix m = build_features(recs);
  const int c = column(m, "client_user_freq");
  CHECK(m.values(0, c) == doctest::Approx(0.75));
  CHECK(m.values(3, c) == doctest::Approx(0.25));
}

TEST_CASE("indicator encodings") {
  std::vector<ConnectionRecord> recs(3, at("2017-09-27T12:00:00Z"));
  recs[0].client_port = 443;   // privileged
  recs[1].client_port = 38432;
  recs[0].return_code = 1017;
  recs[1].return_code = 0;
  recs[0].type = "establish";
  recs[1].type = "dbconnection";
  const FeatureMatrix m = build_features(recs);
  CHECK(m.values(0, column(m, "privileged_port")) == 1.0);
  CHECK(m.values(1, column(m, "privileged_port")) == 0.0);
  CHECK(m.values(0, column(m, "return_code_nonzero")) == 1.0);
  CHECK(m.values(1, column(m, "return_code_nonzero")) == 0.0);
  CHECK(m.values(0, column(m, "establish")) == 1.0);
  CHECK(m.values(1, column(m, "establish")) == 0.0);
  // Absent fields encode as 0 for every indicator and passthrough.
  CHECK(m.values(2, column(m, "client_port")) == 0.0);
  CHECK(m.values(2, column(m, "privileged_port")) == 0.0);
}

TEST_CASE("build_features rejects empty input and unknown sources") {
  CHECK_THROWS_AS(build_features({}), EmptyInput);
  FeatureSpec spec;
  FeatureDef def;
  def.name = "x";
  def.source_field = "no_such_field";
  def.encoder = EncoderKind::Frequency;
  spec.features.push_back(def);
  CHECK_THROWS_AS(build_features({at("2017-09-27T12:00:00Z")}, spec),
                  UnknownSourceField);
}

TEST_CASE("standardize: population moments, zero-variance flagging") {
  FeatureMatrix m;
  m.values = Matrix(3, 2);
  m.values << 1, 5, 2, 5, 3, 5;
  m.column_names = {"a", "b"};
  const FeatureMatrix z = standardize(m);

  // Column a: mean 2, population stddev sqrt(2/3).
  const double s = std::sqrt(2.0 / 3.0);
  CHECK(z.values(0, 0) == doctest::Approx(-1.0 / s));
  CHECK(z.values(1, 0) == doctest::Approx(0.0));
  CHECK(z.values(2, 0) == doctest::Approx(1.0 / s));
  CHECK(z.values(0, 0) == doctest::Approx(-1.224744871).epsilon(1e-9));
  CHECK(z.standardization[0].mean == doctest::Approx(2.0));
  CHECK(z.standardization[0].stddev == doctest::Approx(s));
  CHECK_FALSE(z.standardization[0].zero_variance);

  // Constant column: all zeros, flagged.
  CHECK(z.standardization[1].zero_variance);
  CHECK(z.values.col(1).cwiseAbs().maxCoeff() == 0.0);

  // Standardizing a standardized matrix is a no-op (idempotence).
  const FeatureMatrix zz = standardize(z);
  CHECK((zz.values - z.values).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-12));

  FeatureMatrix tiny;
  tiny.values = Matrix(1, 1);
  tiny.values << 1;
  tiny.column_names = {"a"};
  CHECK_THROWS_AS(standardize(tiny), TooFewRows);
}

TEST_CASE("apply_standardization reuses training statistics") {
  FeatureMatrix train;
  train.values = Matrix(3, 1);
  train.values << 1, 2, 3;
  train.column_names = {"a"};
  const FeatureMatrix z = standardize(train);

  FeatureMatrix held;
  held.values = Matrix(1, 1);
  held.values << 2;  // the training mean
  held.column_names = {"a"};
  const FeatureMatrix out = apply_standardization(held, z.standardization);
  CHECK(out.values(0, 0) == doctest::Approx(0.0));
}
