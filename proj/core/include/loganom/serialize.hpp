#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "loganom/ensemble.hpp"
#include "loganom/evaluation.hpp"
#include "loganom/reduce.hpp"

namespace loganom {

// All JSON documents carry "schema_version"; key order is fixed so that
// identical runs serialize byte-identically.
constexpr int kSchemaVersion = 1;

std::string report_to_json(const EnsembleReport& report);
std::string tuning_to_json(const TuningResult& result);

/// `index,flag` with a one-line header.
void write_flags_csv(std::ostream& out, const std::vector<char>& flags);

/// `x,y[,z],flag` with a one-line header; omit flags to drop the column.
void write_embedding_csv(std::ostream& out, const Matrix& coords,
                         const std::vector<char>* flags);

/// `contamination,silhouette` trial table.
void write_tuning_csv(std::ostream& out, const TuningResult& result);

/// Truth sidecar: `index,label` with a one-line header.
void write_truth_csv(std::ostream& out, const std::vector<int>& labels);
std::vector<int> read_truth_csv(std::istream& in);

}  // namespace loganom
