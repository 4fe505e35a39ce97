#include "loganom/serialize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

#include "loganom/errors.hpp"

namespace loganom {
namespace {

using json = nlohmann::ordered_json;

json detector_config_to_json(const DetectorConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["contamination"] = c.contamination;
  switch (c.kind) {
    case DetectorKind::Knn:
    case DetectorKind::Lof:
      j["k"] = c.k;
      break;
    case DetectorKind::IForest:
      j["n_trees"] = c.n_trees;
      j["subsample"] = c.subsample;
      break;
    case DetectorKind::Ocsvm:
      j["nu"] = c.ocsvm.nu;
      j["gamma"] = c.ocsvm.gamma > 0.0 ? json(c.ocsvm.gamma) : json("auto");
      j["tol"] = c.ocsvm.tol;
      break;
  }
  return j;
}

json verdict_to_json(const DetectorVerdict& v) {
  json j;
  j["detector"] = to_string(v.config.kind);
  j["config"] = detector_config_to_json(v.config);
  j["threshold"] = v.threshold;
  j["rounds_used"] = v.rounds_used;
  j["warning"] = v.warning;
  j["flagged_count"] =
      std::count(v.flags.begin(), v.flags.end(), char(1));
  j["fit_stats"] = json::object();
  for (const auto& [key, value] : v.fit_stats) j["fit_stats"][key] = value;
  j["scores"] = v.scores;
  j["flags"] = json::array();
  for (char f : v.flags) j["flags"].push_back(f != 0);
  return j;
}

}  // namespace

std::string report_to_json(const EnsembleReport& report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = json::object();
  j["config"]["vote"] = to_string(report.config.vote);
  j["config"]["seed"] = report.config.seed;
  j["config"]["filter"] = {
      {"enabled", report.config.filter.enabled},
      {"target_fraction", report.config.filter.target_fraction},
      {"max_rounds", report.config.filter.max_rounds},
      {"rethreshold_only", report.config.filter.rethreshold_only},
  };
  j["verdicts"] = json::array();
  for (const auto& v : report.verdicts) j["verdicts"].push_back(verdict_to_json(v));
  j["consensus_flags"] = json::array();
  for (char f : report.consensus_flags) j["consensus_flags"].push_back(f != 0);
  if (report.consensus_silhouette) {
    j["consensus_silhouette"] = *report.consensus_silhouette;
  } else {
    j["consensus_silhouette"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string tuning_to_json(const TuningResult& result) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["detector"] = to_string(result.detector);
  j["seed"] = result.seed;
  j["best_contamination"] = result.best_contamination;
  j["best_silhouette"] = result.best_silhouette;
  j["trials"] = json::array();
  for (const auto& t : result.trials) {
    json trial;
    trial["contamination"] = t.contamination;
    if (t.failed) {
      trial["failed"] = true;
      trial["error"] = t.error;
    } else {
      trial["silhouette"] = t.silhouette;
    }
    j["trials"].push_back(trial);
  }
  return j.dump(2) + "\n";
}

void write_flags_csv(std::ostream& out, const std::vector<char>& flags) {
  out << "index,flag\n";
  for (std::size_t i = 0; i < flags.size(); ++i)
    out << i << ',' << (flags[i] ? 1 : 0) << '\n';
}

void write_embedding_csv(std::ostream& out, const Matrix& coords,
                         const std::vector<char>* flags) {
  const Eigen::Index p = coords.cols();
  out << "x,y";
  if (p >= 3) out << ",z";
  if (flags) out << ",flag";
  out << '\n';
  // Full round-trip precision so re-plots match the run exactly.
  std::ostringstream row;
  row.precision(17);
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    row.str("");
    for (Eigen::Index jcol = 0; jcol < p; ++jcol) {
      if (jcol) row << ',';
      row << coords(i, jcol);
    }
    if (flags) row << ',' << ((*flags)[static_cast<std::size_t>(i)] ? 1 : 0);
    out << row.str() << '\n';
  }
}

void write_tuning_csv(std::ostream& out, const TuningResult& result) {
  std::ostringstream row;
  row.precision(17);
  row << "contamination,silhouette\n";
  for (const auto& t : result.trials)
    row << t.contamination << ',' << t.silhouette << '\n';
  out << row.str();
}

void write_truth_csv(std::ostream& out, const std::vector<int>& labels) {
  out << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << i << ',' << labels[i] << '\n';
}

std::vector<int> read_truth_csv(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  if (!std::getline(in, line)) throw IoFailure("empty truth file");
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoFailure("bad truth line: " + line);
    const std::size_t index = std::stoull(line.substr(0, comma));
    if (index != expected)
      throw IoFailure("truth indices out of order at line for index " +
                      std::to_string(index));
    labels.push_back(std::stoi(line.substr(comma + 1)));
    ++expected;
  }
  return labels;
}

}  // namespace loganom
