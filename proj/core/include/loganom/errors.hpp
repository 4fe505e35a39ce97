#pragma once

#include <stdexcept>
#include <string>

namespace loganom {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- ingest ------------------------------------------------------------
struct MalformedLine : Error {
  using Error::Error;
};
struct MalformedRecord : Error {
  using Error::Error;
};
struct FieldTypeError : Error {
  explicit FieldTypeError(const std::string& field, const std::string& detail)
      : Error("field type error: " + field + ": " + detail), field(field) {}
  std::string field;
};
struct InvalidTimestamp : Error {
  using Error::Error;
};
struct IoFailure : Error {
  using Error::Error;
};
struct ConfigInvalid : Error {
  using Error::Error;
};

// -- features / reduction ----------------------------------------------
struct EmptyInput : Error {
  using Error::Error;
};
struct UnknownSourceField : Error {
  using Error::Error;
};
struct TooFewRows : Error {
  using Error::Error;
};
struct DimensionTooLarge : Error {
  using Error::Error;
};

// -- detectors -----------------------------------------------------------
struct KTooLarge : Error {
  using Error::Error;
};
struct SubsampleTooLarge : Error {
  using Error::Error;
};
struct BadGamma : Error {
  using Error::Error;
};

// -- evaluation / ensemble ------------------------------------------------
struct SingleCluster : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct AllTrialsFailed : Error {
  using Error::Error;
};

}  // namespace loganom
