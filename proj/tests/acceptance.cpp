// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails. Tolerances are
// pinned inline next to the checks they guard.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "loganom/detectors.hpp"
#include "loganom/ensemble.hpp"
#include "loganom/evaluation.hpp"
#include "loganom/features.hpp"
#include "loganom/ingest.hpp"
#include "loganom/reduce.hpp"
#include "loganom/rng.hpp"
#include "loganom/synthetic.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace loganom;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << number << "] " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---- 1: reference record round-trip ---------------------------------------

void criterion_sample_record() {
  const std::string line =
      R"({"type": "dbconnection", "client_program": "python", "client_user": "merge", )"
      R"("clientip_name": "", "oracle_sid": "XXXX_YYYY", "flume_agent_version": "0.1.6-7.el6", )"
      R"("client_host": "p000x2.cern.ch", "CONNECT_DATA_SERVER": "dedicated", )"
      R"("event_timestamp": "2017-09-27T04:45:27+0200", "CONNECT_DATA_SERVICE_NAME": "CMSR.cern.ch", )"
      R"("client_protocol": "tcp", "client_ip": "137.100.100.167", "client_port": "38432", )"
      R"("hostname": "XXXXX.cern.ch", "type": "establish", "return_code": 0})";
  bool ok = false;
  std::string detail;
  try {
    const ConnectionRecord rec = parse_record(line);
    ok = rec.client_port && *rec.client_port == 38432 && rec.return_code &&
         *rec.return_code == 0 && rec.client_user &&
         *rec.client_user == "merge" && rec.event_timestamp &&
         rec.event_timestamp->raw == "2017-09-27T04:45:27+0200";
    if (!ok) detail = "field values differ from the reference line";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(1, "reference establish record parses with port 38432, return code 0",
         ok, detail);
}

// ---- 2: ensemble defaults --------------------------------------------------

void criterion_default_contaminations() {
  const EnsembleConfig cfg = EnsembleConfig::defaults();
  const std::vector<std::pair<DetectorKind, double>> want = {
      {DetectorKind::Knn, 0.02},
      {DetectorKind::IForest, 0.03},
      {DetectorKind::Lof, 0.05},
      {DetectorKind::Ocsvm, 0.02},
  };
  bool ok = cfg.detectors.size() == want.size();
  if (ok)
    for (std::size_t i = 0; i < want.size(); ++i)
      ok = ok && cfg.detectors[i].kind == want[i].first &&
           std::abs(cfg.detectors[i].contamination - want[i].second) == 0.0;
  report(2, "default roster is knn 2%, iforest 3%, lof 5%, ocsvm 2%", ok);
}

// ---- 3: oracle cross-checks ------------------------------------------------

void criterion_oracle_agreement() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    auto rng = make_rng(9000 + trial, "acceptance/oracle");
    const int n = 30 + static_cast<int>(uniform_int(rng, 0, 270));
    const int d = 2 + static_cast<int>(uniform_int(rng, 0, 4));
    const Matrix points = oracle::random_matrix(n, d, 500 + trial);
    const int k = 1 + static_cast<int>(uniform_int(rng, 0, std::min(n - 2, 24)));

    const auto knn_lib = knn_score(points, k);
    const auto knn_ref = oracle::knn(points, k);
    const auto lof_lib = lof_score(points, k);
    const auto lof_ref = oracle::lof(points, k);
    for (int i = 0; i < n; ++i) {
      if (std::abs(knn_lib[i] - knn_ref[i]) > 1e-9) {
        ok = false;
        detail = "knn mismatch, trial " + std::to_string(trial);
      }
      if (std::abs(lof_lib[i] - lof_ref[i]) > 1e-9) {
        ok = false;
        detail = "lof mismatch, trial " + std::to_string(trial);
      }
    }

    std::vector<int> labels(n);
    const int n_clusters = 2 + static_cast<int>(uniform_int(rng, 0, 1));
    for (int i = 0; i < n; ++i)
      labels[i] = static_cast<int>(uniform_int(rng, 0, n_clusters - 1));
    labels[0] = 0;
    labels[1] = 1;  // guarantee at least two clusters
    if (std::abs(silhouette(points, labels) -
                 oracle::silhouette(points, labels)) > 1e-9) {
      ok = false;
      detail = "silhouette mismatch, trial " + std::to_string(trial);
    }
  }
  const double elapsed = seconds_since(start);
  if (ok && elapsed >= 60.0) {
    ok = false;
    detail = "took " + std::to_string(elapsed) + "s, budget 60s";
  }
  report(3, "knn, lof, silhouette match brute-force references on 100 instances",
         ok, detail);
}

// ---- 4: LOF hand-worked value ----------------------------------------------

void criterion_lof_hand_case() {
  Matrix points(5, 1);
  points << 0.0, 1.0, 2.0, 3.0, 10.0;
  const auto scores = lof_score(points, 2);
  const bool ok = std::abs(scores[4] - 5.0) <= 1e-9;
  report(4, "LOF of the isolated point in {0,1,2,3,10} at k=2 is 5.0", ok,
         ok ? "" : "got " + std::to_string(scores[4]));
}

// ---- 5: isolation-forest normalization and score range ---------------------

void criterion_iforest() {
  bool ok = std::abs(iforest_c(2) - 1.0) <= 1e-12;
  std::string detail;
  // c(256) = 2 H(255) - 2*255/256 with H harmonic.
  if (std::abs(iforest_c(256) - 10.244) > 1e-2) {
    ok = false;
    detail = "c(256) = " + std::to_string(iforest_c(256));
  }

  const Matrix points = oracle::random_matrix(400, 4, 77);
  const auto forest = IsolationForest::fit(points, 100, 256, 1);
  for (double s : forest.score(points))
    if (!(s > 0.0 && s < 1.0)) {
      ok = false;
      detail = "score outside (0,1)";
    }
  report(5, "iforest c(2)=1, c(256)~10.244, scores stay inside (0,1)", ok,
         detail);
}

// ---- 6: one-class SVM nu property -------------------------------------------

void criterion_ocsvm_nu() {
  bool ok = true;
  std::string detail;
  const int n = 200;
  const double slack = 1.0 / n;
  for (int s = 0; s < 20 && ok; ++s) {
    const Matrix points = oracle::random_matrix(n, 3, 3000 + s);
    for (double nu : {0.05, 0.1, 0.3}) {
      OcsvmParams params;
      params.nu = nu;
      const auto model = OneClassSvm::fit(points, params);
      const double sv_frac =
          static_cast<double>(model.support_vector_count()) / n;
      if (model.margin_error_fraction() > nu + slack ||
          sv_frac < nu - slack) {
        ok = false;
        detail = "seed " + std::to_string(s) + ", nu " + std::to_string(nu) +
                 ": margin errors " +
                 std::to_string(model.margin_error_fraction()) + ", sv frac " +
                 std::to_string(sv_frac);
      }
    }
  }
  report(6, "ocsvm margin errors <= nu and support vectors >= nu, within 1/n",
         ok, detail);
}

// ---- 7: planted-anomaly recall ----------------------------------------------

Matrix synthetic_embedding(std::uint64_t seed, std::vector<int>* labels) {
  SyntheticConfig cfg;
  cfg.n_records = 2000;
  cfg.outlier_fraction = 0.02;
  cfg.seed = seed;
  const SyntheticDataset data = generate_synthetic(cfg);
  *labels = data.labels;
  const FeatureMatrix z = standardize(build_features(data.records));
  return pca_fit(z, 3).coords;
}

void criterion_recall() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> labels;
  const Matrix coords = synthetic_embedding(42, &labels);

  EnsembleConfig cfg = EnsembleConfig::defaults();
  cfg.seed = 42;
  const EnsembleReport rep = run_ensemble(coords, cfg);

  bool ok = true;
  std::ostringstream detail;
  for (const auto& v : rep.verdicts) {
    const TruthMetrics m = evaluate_against_truth(v.flags, labels);
    const double need = v.config.kind == DetectorKind::Ocsvm ? 0.8 : 0.9;
    const double recall = m.recall.value_or(0.0);
    detail << to_string(v.config.kind) << " " << recall << " ";
    if (recall < need) ok = false;
  }
  const TruthMetrics consensus =
      evaluate_against_truth(rep.consensus_flags, labels);
  detail << "union " << consensus.recall.value_or(0.0);
  if (consensus.recall.value_or(0.0) < 0.9) ok = false;

  const double elapsed = seconds_since(start);
  if (elapsed >= 30.0) {
    ok = false;
    detail << "; took " << elapsed << "s, budget 30s";
  }
  report(7, "n=2000 2% seed 42: recalls >= 0.9 (ocsvm >= 0.8), union >= 0.9",
         ok, detail.str());
}

// ---- 8: recursive filter converges ------------------------------------------

void criterion_recursive_filter() {
  std::vector<int> labels;
  const Matrix coords = synthetic_embedding(42, &labels);

  DetectorConfig config;
  config.kind = DetectorKind::Lof;
  config.contamination = 0.10;  // deliberately loose initial threshold
  config.k = 50;
  FilterSettings settings;
  settings.enabled = true;
  settings.target_fraction = 0.02;
  settings.max_rounds = 8;

  const DetectorVerdict v = recursive_filter(coords, config, settings);
  const auto flagged =
      std::count(v.flags.begin(), v.flags.end(), char(1));
  const double limit = 0.02 * static_cast<double>(coords.rows());
  const bool ok = static_cast<double>(flagged) <= limit &&
                  v.rounds_used <= settings.max_rounds && !v.warning;
  report(8, "recursive filter drives 10% initial flags down to <= 2%", ok,
         "flagged " + std::to_string(flagged) + " of " +
             std::to_string(coords.rows()) + " in " +
             std::to_string(v.rounds_used) + " rounds");
}

// ---- 9: contamination tuner lands on the planted rate ------------------------

void criterion_tuner() {
  std::vector<int> labels;
  const Matrix coords = synthetic_embedding(42, &labels);

  bool ok = true;
  std::ostringstream detail;
  for (DetectorKind kind : {DetectorKind::Knn, DetectorKind::Lof}) {
    DetectorConfig base;
    base.kind = kind;
    base.k = kind == DetectorKind::Lof ? 50 : 20;
    const TuningResult r =
        tune_contamination(coords, base, 50, {0.005, 0.08}, 7);
    detail << to_string(kind) << " " << r.best_contamination << " ";
    if (!(r.best_contamination >= 0.01 && r.best_contamination <= 0.03))
      ok = false;
  }
  report(9, "50-trial tuner picks contamination in [0.01, 0.03] on the 2% set",
         ok, detail.str());
}

// ---- 10: PCA and SVD reductions agree ----------------------------------------

void criterion_reductions_agree() {
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const int n = 40 + trial;
    const int d = 4 + trial % 5;
    const int p = 2 + trial % 2;
    const Matrix m = oracle::random_matrix(n, d, 8800 + trial);
    FeatureMatrix fm;
    fm.values = m;
    fm.column_names.resize(d, "x");
    const ReducedEmbedding a = pca_fit(fm, p);
    const ReducedEmbedding b = svd_reduce(fm, p);

    if ((a.coords.cwiseAbs() - b.coords.cwiseAbs()).cwiseAbs().maxCoeff() >
        1e-8) {
      ok = false;
      detail = "coordinate mismatch, trial " + std::to_string(trial);
    }
    const Matrix gram = a.basis.transpose() * a.basis;
    if ((gram - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() > 1e-10) {
      ok = false;
      detail = "basis not orthonormal, trial " + std::to_string(trial);
    }
    for (std::size_t i = 1; i < a.explained_variance_ratio.size(); ++i)
      if (a.explained_variance_ratio[i] >
          a.explained_variance_ratio[i - 1] + 1e-12) {
        ok = false;
        detail = "ratios increase, trial " + std::to_string(trial);
      }
  }
  report(10, "pca and svd reductions agree to 1e-8 on 50 random matrices", ok,
         detail);
}

// ---- 11: CLI determinism ------------------------------------------------------

#ifndef LOGANOM_CLI_PATH
#error "LOGANOM_CLI_PATH must name the CLI binary"
#endif

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_cli_determinism() {
  const std::string cli = LOGANOM_CLI_PATH;
  const fs::path root = fs::temp_directory_path() / "loganom_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };

  bool ok = true;
  std::string detail;
  const fs::path gen = root / "gen";
  if (run("generate -n 600 --outliers 0.02 --seed 42 -o " + gen.string()) != 0) {
    ok = false;
    detail = "generate failed";
  }
  const fs::path a = root / "a";
  const fs::path b = root / "b";
  const std::string detect =
      "detect -i " + (gen / "records.ndjson").string() + " --seed 42 -o ";
  if (ok && (run(detect + a.string()) != 0 || run(detect + b.string()) != 0)) {
    ok = false;
    detail = "detect failed";
  }
  if (ok)
    for (const char* name : {"report.json", "flags.csv", "embedding.csv"})
      if (slurp(a / name) != slurp(b / name)) {
        ok = false;
        detail = std::string(name) + " differs between runs";
      }
  report(11, "two identical detect invocations produce byte-identical output",
         ok, detail);
}

}  // namespace

int main() {
  criterion_sample_record();
  criterion_default_contaminations();
  criterion_oracle_agreement();
  criterion_lof_hand_case();
  criterion_iforest();
  criterion_ocsvm_nu();
  criterion_recall();
  criterion_recursive_filter();
  criterion_tuner();
  criterion_reductions_agree();
  criterion_cli_determinism();

  if (g_failures == 0) {
    std::cout << "all 11 criteria passed" << std::endl;
    return 0;
  }
  std::cout << g_failures << " criteria failed" << std::endl;
  return 1;
}
