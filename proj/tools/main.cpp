// loganom: connection-log anomaly detection toolkit.
//
// Subcommands:
//   generate  synthesize a connection log with planted anomalies + truth file
//   detect    ingest -> features -> reduce -> detector ensemble -> report
//   tune      randomized contamination search per detector
//   report    join a detection report with truth labels into metrics tables
//
// Exit codes: 0 success, 2 usage, 3 I/O failure, 4 pipeline error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "loganom/ensemble.hpp"
#include "loganom/errors.hpp"
#include "loganom/evaluation.hpp"
#include "loganom/features.hpp"
#include "loganom/ingest.hpp"
#include "loganom/reduce.hpp"
#include "loganom/rng.hpp"
#include "loganom/serialize.hpp"
#include "loganom/synthetic.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace loganom;

namespace {

// Fixed default seed (not time-based) so every run is reproducible.
constexpr std::uint64_t kDefaultSeed = 20170927;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitPipeline = 4;

struct RunConfig {
  std::string input = "-";
  std::string output_dir = ".";
  std::uint64_t seed = kDefaultSeed;
  int dims = 3;
  bool strict = false;
  bool use_embedding = true;
  int verbosity = 0;
  EnsembleConfig ensemble = EnsembleConfig::defaults();
  FeatureSpec feature_spec = FeatureSpec::defaults();
  // tuner
  std::vector<std::string> tune_detectors;
  int trials = 50;
  std::pair<double, double> range{0.005, 0.08};
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoFailure("write failed: " + path.string());
}

IngestResult ingest(const RunConfig& cfg) {
  const ParseMode mode = cfg.strict ? ParseMode::Strict : ParseMode::Lenient;
  if (cfg.input == "-") return read_log(std::cin, mode);
  return read_log_file(cfg.input, mode);
}

EncoderKind encoder_from_string(const std::string& s) {
  if (s == "cyclical-time") return EncoderKind::CyclicalTime;
  if (s == "frequency") return EncoderKind::Frequency;
  if (s == "numeric-passthrough") return EncoderKind::NumericPassthrough;
  if (s == "binary-indicator") return EncoderKind::BinaryIndicator;
  throw ConfigInvalid("unknown encoder kind: " + s);
}

IndicatorPredicate predicate_from_string(const std::string& s) {
  if (s == "equals") return IndicatorPredicate::Equals;
  if (s == "nonzero") return IndicatorPredicate::Nonzero;
  if (s == "less-than") return IndicatorPredicate::LessThan;
  throw ConfigInvalid("unknown indicator predicate: " + s);
}

DetectorConfig detector_config_from_json(const json& j) {
  DetectorConfig c;
  c.kind = detector_kind_from_string(j.at("kind").get<std::string>());
  switch (c.kind) {  // keep per-kind defaults unless overridden below
    case DetectorKind::Knn: c.contamination = 0.02; break;
    case DetectorKind::IForest: c.contamination = 0.03; break;
    case DetectorKind::Lof:
      c.contamination = 0.05;
      c.k = 50;
      break;
    case DetectorKind::Ocsvm: c.contamination = 0.02; break;
  }
  if (j.contains("contamination")) c.contamination = j["contamination"].get<double>();
  if (j.contains("k")) c.k = j["k"].get<int>();
  if (j.contains("n_trees")) c.n_trees = j["n_trees"].get<int>();
  if (j.contains("subsample")) c.subsample = j["subsample"].get<int>();
  if (j.contains("nu")) c.ocsvm.nu = j["nu"].get<double>();
  if (j.contains("gamma") && !j["gamma"].is_string())
    c.ocsvm.gamma = j["gamma"].get<double>();
  if (j.contains("tol")) c.ocsvm.tol = j["tol"].get<double>();
  if (j.contains("max_iter")) c.ocsvm.max_iter = j["max_iter"].get<long long>();
  return c;
}

// Values from the config file apply only where the command line stayed
// silent: flags win.
void merge_config_file(RunConfig& cfg, const std::string& path, const CLI::App* cmd) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config file: ") + e.what());
  }
  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  if (j.contains("seed") && unset("--seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("dims") && unset("--dims")) cfg.dims = j["dims"].get<int>();
  if (j.contains("vote") && unset("--vote"))
    cfg.ensemble.vote = vote_rule_from_string(j["vote"].get<std::string>());
  if (j.contains("use_embedding") && unset("--raw-features"))
    cfg.use_embedding = j["use_embedding"].get<bool>();
  if (j.contains("detectors") && unset("--detectors")) {
    cfg.ensemble.detectors.clear();
    for (const auto& d : j["detectors"]) {
      // Accept both "knn" and {"kind": "knn", ...}.
      const json entry = d.is_string() ? json{{"kind", d}} : d;
      cfg.ensemble.detectors.push_back(detector_config_from_json(entry));
    }
  }
  if (j.contains("filter")) {
    const auto& f = j["filter"];
    if (f.contains("enabled") && unset("--recursive-filter"))
      cfg.ensemble.filter.enabled = f["enabled"].get<bool>();
    if (f.contains("target_fraction") && unset("--target"))
      cfg.ensemble.filter.target_fraction = f["target_fraction"].get<double>();
    if (f.contains("max_rounds") && unset("--max-rounds"))
      cfg.ensemble.filter.max_rounds = f["max_rounds"].get<int>();
    if (f.contains("rethreshold_only") && unset("--rethreshold"))
      cfg.ensemble.filter.rethreshold_only = f["rethreshold_only"].get<bool>();
  }
  if (j.contains("feature_spec")) {
    FeatureSpec spec;
    for (const auto& f : j["feature_spec"]) {
      FeatureDef def;
      def.name = f.at("name").get<std::string>();
      def.source_field = f.at("source_field").get<std::string>();
      def.encoder = encoder_from_string(f.at("encoder").get<std::string>());
      if (f.contains("predicate"))
        def.predicate = predicate_from_string(f["predicate"].get<std::string>());
      if (f.contains("param_text")) def.param_text = f["param_text"].get<std::string>();
      if (f.contains("param_number")) def.param_number = f["param_number"].get<double>();
      spec.features.push_back(def);
    }
    cfg.feature_spec = std::move(spec);
  }
  if (j.contains("trials") && unset("--trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("range") && unset("--range")) {
    cfg.range = {j["range"][0].get<double>(), j["range"][1].get<double>()};
  }
}

void restrict_detectors(RunConfig& cfg, const std::string& csv) {
  std::vector<DetectorConfig> chosen;
  std::stringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const DetectorKind kind = detector_kind_from_string(name);
    bool found = false;
    for (const auto& d : EnsembleConfig::defaults().detectors) {
      if (d.kind == kind) {
        chosen.push_back(d);
        found = true;
      }
    }
    if (!found) throw ConfigInvalid("unknown detector: " + name);
  }
  if (chosen.empty()) throw ConfigInvalid("empty detector list");
  cfg.ensemble.detectors = std::move(chosen);
}

struct Pipeline {
  IngestResult ingested;
  FeatureMatrix standardized;
  ReducedEmbedding embedding;
  Matrix detector_space;  // embedding coords or the standardized matrix
};

Pipeline run_front_half(const RunConfig& cfg) {
  Pipeline p;
  p.ingested = ingest(cfg);
  if (cfg.verbosity > 0) {
    std::cerr << "ingested " << p.ingested.summary.accepted << " records, "
              << p.ingested.summary.rejected << " rejected\n";
  }
  if (p.ingested.records.empty()) throw EmptyInput("EmptyInput: no records");
  const FeatureMatrix features = build_features(p.ingested.records, cfg.feature_spec);
  p.standardized = standardize(features);
  p.embedding = pca_fit(p.standardized, cfg.dims);
  p.detector_space = cfg.use_embedding ? p.embedding.coords : p.standardized.values;
  return p;
}

int cmd_generate(const RunConfig& cfg, std::size_t n, double outliers,
                 const std::vector<double>& mix) {
  SyntheticConfig sc;
  sc.n_records = n;
  sc.outlier_fraction = outliers;
  sc.seed = cfg.seed;
  if (!mix.empty()) {
    if (mix.size() != 3) {
      std::cerr << "error: --mix needs exactly 3 weights\n";
      return kExitUsage;
    }
    sc.archetype_mix = {mix[0], mix[1], mix[2]};
  }
  // Bad bounds are usage errors, reported before any file is touched.
  if (n < 10) {
    std::cerr << "error: -n must be >= 10\n";
    return kExitUsage;
  }
  if (!(outliers >= 0.0 && outliers < 0.5)) {
    std::cerr << "error: --outliers must be in [0, 0.5)\n";
    return kExitUsage;
  }

  const SyntheticDataset data = generate_synthetic(sc);
  fs::create_directories(cfg.output_dir);

  std::ostringstream records;
  for (const auto& rec : data.records) records << serialize_record(rec) << '\n';
  write_file(fs::path(cfg.output_dir) / "records.ndjson", records.str());

  std::ostringstream truth;
  write_truth_csv(truth, data.labels);
  write_file(fs::path(cfg.output_dir) / "truth.csv", truth.str());

  const auto planted =
      std::count(data.labels.begin(), data.labels.end(), 1);
  std::cout << "wrote " << data.records.size() << " records ("
            << planted << " planted anomalies) to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_detect(const RunConfig& cfg) {
  EnsembleConfig ensemble = cfg.ensemble;
  ensemble.seed = cfg.seed;

  const Pipeline p = run_front_half(cfg);
  const EnsembleReport report = run_ensemble(p.detector_space, ensemble);
  if (cfg.verbosity > 0) {
    for (const auto& [stage, ms] : report.timing_ms)
      std::cerr << stage << ": " << ms << " ms\n";
  }

  fs::create_directories(cfg.output_dir);
  write_file(fs::path(cfg.output_dir) / "report.json", report_to_json(report));

  std::ostringstream flags;
  write_flags_csv(flags, report.consensus_flags);
  write_file(fs::path(cfg.output_dir) / "flags.csv", flags.str());

  std::ostringstream embedding;
  write_embedding_csv(embedding, p.embedding.coords, &report.consensus_flags);
  write_file(fs::path(cfg.output_dir) / "embedding.csv", embedding.str());

  for (const auto& v : report.verdicts) {
    std::cout << to_string(v.config.kind) << ": contamination "
              << v.config.contamination << ", flagged "
              << std::count(v.flags.begin(), v.flags.end(), char(1))
              << ", rounds " << v.rounds_used << (v.warning ? " (warning)" : "")
              << "\n";
  }
  std::cout << "consensus (" << to_string(ensemble.vote) << "): "
            << std::count(report.consensus_flags.begin(),
                          report.consensus_flags.end(), char(1))
            << " flagged of " << report.consensus_flags.size() << "\n";
  return 0;
}

int cmd_tune(const RunConfig& cfg) {
  const Pipeline p = run_front_half(cfg);
  fs::create_directories(cfg.output_dir);

  std::vector<std::string> kinds = cfg.tune_detectors;
  if (kinds.empty()) kinds = {"knn", "iforest", "lof", "ocsvm"};

  for (const auto& name : kinds) {
    DetectorConfig base;
    for (const auto& d : cfg.ensemble.detectors)
      if (d.kind == detector_kind_from_string(name)) base = d;
    base.kind = detector_kind_from_string(name);
    base.seed = stage_seed(cfg.seed, "detector/" + name);

    const TuningResult result = tune_contamination(
        p.detector_space, base, cfg.trials, cfg.range, cfg.seed);
    write_file(fs::path(cfg.output_dir) / ("tuning_" + name + ".json"),
               tuning_to_json(result));
    std::ostringstream csv;
    write_tuning_csv(csv, result);
    write_file(fs::path(cfg.output_dir) / ("tuning_" + name + ".csv"), csv.str());
    std::cout << name << ": best contamination " << result.best_contamination
              << " (silhouette " << result.best_silhouette << ")\n";
  }
  return 0;
}

void print_metrics_row(std::ostream& out, std::ostream& csv,
                       const std::string& name, const TruthMetrics& m) {
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %6zu %6zu %6zu %6zu %9s %9s %9s\n",
                name.c_str(), m.tp, m.fp, m.fn, m.tn, fmt(m.precision).c_str(),
                fmt(m.recall).c_str(), fmt(m.f1).c_str());
  out << line;
  csv << name << ',' << m.tp << ',' << m.fp << ',' << m.fn << ',' << m.tn << ','
      << fmt(m.precision) << ',' << fmt(m.recall) << ',' << fmt(m.f1) << '\n';
}

int cmd_report(const RunConfig& cfg, const std::string& report_path,
               const std::string& truth_path) {
  std::ifstream in(report_path);
  if (!in) throw IoFailure("cannot open " + report_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(std::string("bad report JSON: ") + e.what());
  }

  std::vector<std::pair<std::string, std::vector<char>>> flag_sets;
  for (const auto& v : j.at("verdicts")) {
    std::vector<char> flags;
    for (const auto& f : v.at("flags")) flags.push_back(f.get<bool>() ? 1 : 0);
    flag_sets.emplace_back(v.at("detector").get<std::string>(), std::move(flags));
  }
  {
    std::vector<char> consensus;
    for (const auto& f : j.at("consensus_flags"))
      consensus.push_back(f.get<bool>() ? 1 : 0);
    flag_sets.emplace_back("consensus", std::move(consensus));
  }

  std::vector<int> truth;
  bool have_truth = false;
  if (!truth_path.empty()) {
    std::ifstream tin(truth_path);
    if (!tin) throw IoFailure("cannot open " + truth_path);
    truth = read_truth_csv(tin);
    have_truth = true;
  }

  std::ostringstream csv;
  csv << "detector,tp,fp,fn,tn,precision,recall,f1\n";
  if (have_truth) {
    char header[160];
    std::snprintf(header, sizeof header, "%-10s %6s %6s %6s %6s %9s %9s %9s\n",
                  "detector", "tp", "fp", "fn", "tn", "precision", "recall", "f1");
    std::cout << header;
    for (const auto& [name, flags] : flag_sets) {
      const TruthMetrics m = evaluate_against_truth(flags, truth);
      print_metrics_row(std::cout, csv, name, m);
    }
  } else {
    std::cout << "no truth file given; flag counts only\n";
    for (const auto& [name, flags] : flag_sets) {
      std::cout << name << ": "
                << std::count(flags.begin(), flags.end(), char(1))
                << " flagged of " << flags.size() << "\n";
    }
  }

  fs::create_directories(cfg.output_dir);
  write_file(fs::path(cfg.output_dir) / "metrics.csv", csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"connection-log anomaly detection toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  // generate
  auto* gen = app.add_subcommand("generate", "synthesize a log with planted anomalies");
  std::size_t gen_n = 1000;
  double gen_outliers = 0.02;
  std::vector<double> gen_mix;
  gen->add_option("-n,--records", gen_n, "number of records");
  gen->add_option("--outliers", gen_outliers, "planted outlier fraction in [0, 0.5)");
  gen->add_option("--mix", gen_mix, "archetype weights (3 values)")->expected(3);
  gen->add_option("--seed", cfg.seed, "rng seed");
  gen->add_option("-o,--output", cfg.output_dir, "output directory");

  auto add_pipeline_options = [&](CLI::App* cmd) {
    cmd->add_option("-i,--input", cfg.input, "input NDJSON file, or - for stdin");
    cmd->add_option("-o,--output", cfg.output_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "rng seed");
    cmd->add_option("--dims", cfg.dims, "reduction dimensions")
        ->check(CLI::IsMember({2, 3}));
    cmd->add_option("--config", config_path, "JSON config file (flags win)");
    cmd->add_flag("--strict", cfg.strict, "abort on the first bad input line");
    cmd->add_flag("-v,--verbose", cfg.verbosity, "verbose progress on stderr");
  };

  // detect
  auto* det = app.add_subcommand("detect", "run the detector ensemble");
  add_pipeline_options(det);
  std::string det_detectors;
  std::string det_vote;
  bool det_filter = false, det_rethreshold = false, det_raw = false;
  det->add_option("--detectors", det_detectors, "comma list: knn,iforest,lof,ocsvm");
  det->add_option("--vote", det_vote, "union|intersection|majority");
  det->add_flag("--recursive-filter", det_filter, "enable recursive FP filtering");
  det->add_option("--target", cfg.ensemble.filter.target_fraction,
                  "filter target fraction of original n");
  det->add_option("--max-rounds", cfg.ensemble.filter.max_rounds, "filter round cap");
  det->add_flag("--rethreshold", det_rethreshold,
                "filter by re-thresholding instead of refitting");
  det->add_flag("--raw-features", det_raw,
                "run detectors on the standardized matrix, not the embedding");

  // tune
  auto* tun = app.add_subcommand("tune", "randomized contamination search");
  add_pipeline_options(tun);
  std::string tune_detector;
  std::vector<double> tune_range;
  tun->add_option("--detector", tune_detector, "comma list, default all");
  tun->add_option("--trials", cfg.trials, "number of sampled contaminations")
      ->check(CLI::PositiveNumber);
  tun->add_option("--range", tune_range, "contamination range lo hi")->expected(2);

  // report
  auto* rep = app.add_subcommand("report", "metrics against a truth sidecar");
  std::string report_path, truth_path;
  rep->add_option("--report", report_path, "report.json from detect")->required();
  rep->add_option("--truth", truth_path, "truth.csv sidecar (optional)");
  rep->add_option("-o,--output", cfg.output_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) merge_config_file(cfg, config_path, active);

    if (gen->parsed()) return cmd_generate(cfg, gen_n, gen_outliers, gen_mix);
    if (det->parsed()) {
      if (!det_detectors.empty()) restrict_detectors(cfg, det_detectors);
      if (!det_vote.empty()) cfg.ensemble.vote = vote_rule_from_string(det_vote);
      if (det_filter) cfg.ensemble.filter.enabled = true;
      if (det_rethreshold) cfg.ensemble.filter.rethreshold_only = true;
      if (det_raw) cfg.use_embedding = false;
      return cmd_detect(cfg);
    }
    if (tun->parsed()) {
      if (!tune_detector.empty()) {
        std::stringstream ss(tune_detector);
        std::string name;
        while (std::getline(ss, name, ','))
          cfg.tune_detectors.push_back(name);
      }
      if (!tune_range.empty()) cfg.range = {tune_range[0], tune_range[1]};
      return cmd_tune(cfg);
    }
    if (rep->parsed()) return cmd_report(cfg, report_path, truth_path);
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return 0;
}
