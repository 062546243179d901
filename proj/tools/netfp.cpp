// netfp: command-line pipeline from crawl snapshots to spectral
// fingerprints, similarity analysis, and anomaly alarms. Stages hand off
// through files; every command is deterministic given its inputs and flags.
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <netfp/anomaly.hpp>
#include <netfp/csv.hpp>
#include <netfp/ingest.hpp>
#include <netfp/reduction.hpp>
#include <netfp/similarity.hpp>
#include <netfp/spectrum.hpp>
#include <netfp/synth.hpp>

namespace fs = std::filesystem;
using namespace netfp;

namespace {

struct SharedConfig {
  std::size_t t = 2048;
  std::size_t k = 40;
  double energy_target = 0.0;
  bool energy_target_set = false;
  double sigma_mult = 3.0;
  std::size_t capacity = 8;
  std::size_t min_history = 4;
  std::uint64_t seed = 0;
};

std::vector<fs::path> sorted_files(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw std::runtime_error("not a directory: '" + dir.string() + "'");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string read_file_or_fail(const fs::path& path) {
  try {
    return csv::read_file(path.string());
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + path.string() + "': " + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    csv::write_file(out_path, text);
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    std::size_t end = text.find(sep, begin);
    if (end == std::string::npos) {
      fields.push_back(text.substr(begin));
      return fields;
    }
    fields.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
}

// ---------------------------------------------------------------- ingest

void run_ingest(const std::string& snapshots_dir, const std::string& geodb_path,
                const std::string& out_dir) {
  std::vector<fs::path> files = sorted_files(snapshots_dir);
  if (files.empty())
    throw std::runtime_error("no snapshots in '" + snapshots_dir + "'");

  std::vector<ingest::CrawlSnapshot> snapshots;
  for (const fs::path& path : files) {
    try {
      snapshots.push_back(ingest::parse_snapshot(read_file_or_fail(path)));
    } catch (const std::exception& e) {
      throw std::runtime_error("'" + path.string() + "': " + e.what());
    }
  }

  ingest::GeoDb db;
  try {
    db = ingest::load_geodb(read_file_or_fail(geodb_path));
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + geodb_path + "': " + e.what());
  }

  std::vector<ingest::CountSeries> series = ingest::aggregate(snapshots, db);
  fs::create_directories(out_dir);
  for (const ingest::CountSeries& s : series) {
    csv::write_file(out_dir + "/" + s.entity + ".csv", ingest::write_series_csv(s));
    std::uint64_t total = 0;
    for (const ingest::SeriesPoint& p : s.points) total += p.count;
    std::cout << s.entity << "," << s.points.size() << "," << total << "\n";
  }
}

// ----------------------------------------------------------- fingerprint

bool all_zero(const std::vector<double>& samples) {
  return std::all_of(samples.begin(), samples.end(),
                     [](double v) { return v == 0.0; });
}

void run_fingerprint(const SharedConfig& cfg, const std::string& series_dir,
                     const std::string& windows_dir, std::int64_t window_start,
                     const std::string& out_path) {
  if (series_dir.empty() == windows_dir.empty())
    throw std::runtime_error("fingerprint: give exactly one of --series and --windows");

  std::vector<spectrum::FeatureVector> features;
  const std::string& dir = series_dir.empty() ? windows_dir : series_dir;
  for (const fs::path& path : sorted_files(dir)) {
    if (path.extension() != ".csv" || path.filename() == "labels.csv") continue;
    ingest::EvolutionWindow window;
    if (!series_dir.empty()) {
      ingest::CountSeries series;
      try {
        series = ingest::read_series_csv(read_file_or_fail(path));
      } catch (const std::exception& e) {
        throw std::runtime_error("'" + path.string() + "': " + e.what());
      }
      if (!ingest::has_resample_coverage(series, window_start)) {
        std::cerr << "warning: skipping entity '" << series.entity
                  << "': insufficient data in window starting " << window_start
                  << "\n";
        continue;
      }
      window = ingest::resample(series, window_start, cfg.t);
    } else {
      try {
        window = synth::read_window_csv(read_file_or_fail(path));
      } catch (const std::exception& e) {
        throw std::runtime_error("'" + path.string() + "': " + e.what());
      }
    }
    if (all_zero(window.samples)) {
      std::cerr << "warning: skipping entity '" << window.entity
                << "': window is all zero\n";
      continue;
    }
    features.push_back(spectrum::fingerprint(window));
  }
  if (features.empty())
    throw std::runtime_error("fingerprint: no usable entities in '" + dir + "'");
  csv::write_file(out_path, spectrum::write_feature_store(features));
}

// --------------------------------------------------------------- analyze

void run_queries(const similarity::SimilarityMatrix& s, const std::string& nn_entity,
                 std::size_t nn_count, std::optional<double> cluster_cutoff) {
  if (!nn_entity.empty()) {
    for (const auto& [code, dist] : similarity::nearest_neighbors(s, nn_entity, nn_count))
      std::cout << code << "," << csv::format_double(dist) << "\n";
  }
  if (cluster_cutoff.has_value()) {
    for (const auto& group : similarity::cluster(s, *cluster_cutoff)) {
      for (std::size_t i = 0; i < group.size(); ++i)
        std::cout << (i ? "," : "") << group[i];
      std::cout << "\n";
    }
  }
}

void run_analyze(const SharedConfig& cfg, const std::string& features_path,
                 const std::string& out_dir, const std::string& basis_in,
                 const std::string& similarity_in, const std::string& nn_entity,
                 std::size_t nn_count, std::optional<double> cluster_cutoff,
                 const std::string& history_dir, std::int64_t window_start) {
  if (!similarity_in.empty()) {
    if (!features_path.empty())
      throw std::runtime_error("analyze: --similarity-in excludes --features");
    similarity::SimilarityMatrix s;
    try {
      s = similarity::read_similarity_csv(read_file_or_fail(similarity_in));
    } catch (const std::exception& e) {
      throw std::runtime_error("'" + similarity_in + "': " + e.what());
    }
    run_queries(s, nn_entity, nn_count, cluster_cutoff);
    return;
  }

  if (features_path.empty())
    throw std::runtime_error("analyze: give --features or --similarity-in");
  if (out_dir.empty()) throw std::runtime_error("analyze: --out is required");

  std::vector<spectrum::FeatureVector> features;
  try {
    features = spectrum::read_feature_store(read_file_or_fail(features_path));
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + features_path + "': " + e.what());
  }
  if (features.size() < 2)
    throw std::runtime_error("analyze: need at least 2 entities, got " +
                             std::to_string(features.size()));

  reduction::FeatureMatrix matrix = reduction::make_feature_matrix(features);
  reduction::SvdResult decomposition = reduction::svd(matrix.data);

  std::size_t rank = 0;
  for (double s : decomposition.singular_values)
    if (s > 0.0) ++rank;

  std::size_t k;
  if (cfg.energy_target_set) {
    k = reduction::choose_k(decomposition.singular_values, cfg.energy_target);
  } else {
    k = cfg.k;
    if (k > rank) {
      std::cerr << "warning: k clamped from " << k << " to matrix rank " << rank
                << "\n";
      k = rank;
    }
  }
  if (k == 0) throw std::runtime_error("analyze: zero usable components");

  reduction::Basis basis;
  if (!basis_in.empty()) {
    try {
      basis = reduction::read_basis_csv(read_file_or_fail(basis_in));
    } catch (const std::exception& e) {
      throw std::runtime_error("'" + basis_in + "': " + e.what());
    }
    basis.singular_values = decomposition.singular_values;
  } else {
    basis = reduction::make_basis(decomposition, k);
  }

  std::vector<reduction::ReducedFeature> reduced = reduction::project(matrix, basis);
  similarity::SimilarityMatrix s = similarity::pdist(reduced);

  fs::create_directories(out_dir);
  csv::write_file(out_dir + "/basis.csv", reduction::write_basis_csv(basis));
  csv::write_file(out_dir + "/singular_values.csv",
                  reduction::write_singular_values_csv(basis.singular_values));
  csv::write_file(out_dir + "/reduced.csv", reduction::write_reduced_csv(reduced));
  csv::write_file(out_dir + "/similarity.csv", similarity::write_similarity_csv(s));
  if (basis.vectors.cols() >= 2) {
    csv::write_file(out_dir + "/scatter.csv",
                    similarity::write_scatter_csv(
                        similarity::scatter_coords(matrix, basis)));
  } else {
    std::cerr << "warning: k < 2, skipping scatter.csv\n";
  }

  if (!history_dir.empty()) {
    fs::create_directories(history_dir);
    for (const reduction::ReducedFeature& feature : reduced) {
      std::string row = std::to_string(window_start);
      for (double c : feature.coords) {
        row += ',';
        row += csv::format_double(c);
      }
      row += '\n';
      const std::string path = history_dir + "/" + feature.entity + ".csv";
      std::string existing;
      if (fs::exists(path)) existing = read_file_or_fail(path);
      csv::write_file(path, existing + row);
    }
  }

  run_queries(s, nn_entity, nn_count, cluster_cutoff);
}

// ---------------------------------------------------------------- detect

std::vector<std::pair<std::int64_t, std::vector<double>>> read_history_file(
    const fs::path& path) {
  std::vector<std::pair<std::int64_t, std::vector<double>>> rows;
  try {
    const std::string text = read_file_or_fail(path);
    for (std::string_view line : csv::lines(text)) {
      std::vector<std::string_view> fields = csv::split(line);
      if (fields.size() < 2)
        throw std::runtime_error("history row needs a start and coordinates");
      std::vector<double> coords;
      coords.reserve(fields.size() - 1);
      for (std::size_t i = 1; i < fields.size(); ++i)
        coords.push_back(csv::parse_double(fields[i], "history coordinate"));
      rows.push_back({csv::parse_int64(fields[0], "window start"), std::move(coords)});
      if (rows.size() > 1) {
        if (rows[rows.size() - 2].first >= rows.back().first)
          throw std::runtime_error("window starts not strictly increasing");
        if (rows[rows.size() - 2].second.size() != rows.back().second.size())
          throw std::runtime_error("inconsistent feature width");
      }
    }
    if (rows.empty()) throw std::runtime_error("empty history file");
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + path.string() + "': " + e.what());
  }
  return rows;
}

void run_detect(const SharedConfig& cfg, const std::string& history_dir,
                const std::string& model_path, const std::string& out_path) {
  std::optional<anomaly::NBModel> model;
  if (!model_path.empty()) {
    try {
      model = anomaly::read_nb_csv(read_file_or_fail(model_path));
    } catch (const std::exception& e) {
      throw std::runtime_error("'" + model_path + "': " + e.what());
    }
  }

  std::vector<anomaly::Alarm> alarms;
  for (const fs::path& path : sorted_files(history_dir)) {
    if (path.extension() != ".csv") continue;
    const std::string entity = path.stem().string();
    anomaly::Baseline baseline;
    baseline.capacity = cfg.capacity;
    for (const auto& [start, coords] : read_history_file(path)) {
      reduction::ReducedFeature current{entity, coords};
      // Test against the baseline before absorbing the new window.
      if (auto alarm = anomaly::threshold_detect(current, baseline, start,
                                                 cfg.sigma_mult, cfg.min_history))
        alarms.push_back(*alarm);
      if (model.has_value() && baseline.history_len() >= cfg.min_history) {
        auto [label, posterior] =
            anomaly::classify_nb(*model, anomaly::classifier_feature(current, baseline));
        if (label == anomaly::Label::anomalous)
          alarms.push_back({entity, start, anomaly::indicator(current, baseline),
                            cfg.sigma_mult * baseline.dev_sigma,
                            anomaly::AlarmSource::classifier});
      }
      baseline = anomaly::update_baseline(std::move(baseline), current);
    }
  }
  emit(anomaly::write_alarms_jsonl(alarms), out_path);
}

// ------------------------------------------------------------------- roc

void run_roc(const std::string& scores_path, const std::string& out_path) {
  std::vector<double> scores;
  std::vector<anomaly::Label> labels;
  try {
    const std::string text = read_file_or_fail(scores_path);
    for (std::string_view line : csv::lines(text)) {
      std::vector<std::string_view> fields = csv::split(line);
      if (fields.size() != 2)
        throw std::runtime_error("expected rows of `score,label`");
      scores.push_back(csv::parse_double(fields[0], "score"));
      if (fields[1] == "1")
        labels.push_back(anomaly::Label::anomalous);
      else if (fields[1] == "0")
        labels.push_back(anomaly::Label::normal);
      else
        throw std::runtime_error("label must be 0 or 1, got '" +
                                 std::string(fields[1]) + "'");
    }
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + scores_path + "': " + e.what());
  }
  emit(anomaly::write_roc_csv(anomaly::roc(scores, labels)), out_path);
}

// ----------------------------------------------------------------- synth

synth::Harmonic parse_harmonic(const std::string& text) {
  std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() != 3)
    throw std::runtime_error("harmonic must be `index:amplitude:phase`, got '" +
                             text + "'");
  return {csv::parse_double(parts[0], "harmonic index"),
          csv::parse_double(parts[1], "harmonic amplitude"),
          csv::parse_double(parts[2], "harmonic phase")};
}

synth::AnomalySpec parse_anomaly(const std::string& text) {
  std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() != 4)
    throw std::runtime_error("anomaly must be `kind:magnitude:start:end`, got '" +
                             text + "'");
  synth::AnomalySpec spec;
  if (parts[0] == "dropout")
    spec.kind = synth::AnomalyKind::dropout;
  else if (parts[0] == "spike")
    spec.kind = synth::AnomalyKind::spike;
  else if (parts[0] == "drift")
    spec.kind = synth::AnomalyKind::drift;
  else
    throw std::runtime_error("anomaly kind must be dropout, spike, or drift, got '" +
                             parts[0] + "'");
  spec.magnitude = csv::parse_double(parts[1], "anomaly magnitude");
  spec.start_fraction = csv::parse_double(parts[2], "anomaly start");
  spec.end_fraction = csv::parse_double(parts[3], "anomaly end");
  return spec;
}

void run_synth(const SharedConfig& cfg, std::size_t n_normal, std::size_t n_anomalous,
               double base_level, double noise_sigma, double weekend_factor,
               const std::vector<std::string>& harmonics,
               const std::vector<std::string>& anomalies, const std::string& out_dir) {
  synth::SignalParams params;
  params.base_level = base_level;
  params.noise_sigma = noise_sigma;
  params.weekend_factor = weekend_factor;
  params.seed = cfg.seed;
  for (const std::string& h : harmonics) params.diurnal.push_back(parse_harmonic(h));
  std::vector<synth::AnomalySpec> specs;
  for (const std::string& a : anomalies) specs.push_back(parse_anomaly(a));

  std::vector<synth::LabelledWindow> dataset =
      synth::make_labelled_dataset(n_normal, n_anomalous, params, specs, cfg.seed, cfg.t);

  fs::create_directories(out_dir);
  for (const synth::LabelledWindow& lw : dataset)
    csv::write_file(out_dir + "/" + lw.window.entity + ".csv",
                    synth::write_window_csv(lw.window));
  csv::write_file(out_dir + "/labels.csv", synth::write_labels_csv(dataset));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer-network evolution fingerprinting toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "TOML-style configuration file; command-line flags take precedence");

  SharedConfig cfg;
  app.add_option("--t", cfg.t, "Window length in samples (power of two)")
      ->capture_default_str();
  app.add_option("--k", cfg.k, "Number of retained components")->capture_default_str();
  CLI::Option* energy_opt = app.add_option(
      "--energy-target", cfg.energy_target,
      "Energy fraction in (0,1]; overrides --k when set");
  app.add_option("--sigma-mult", cfg.sigma_mult, "Alarm threshold multiplier")
      ->capture_default_str();
  app.add_option("--capacity", cfg.capacity, "Baseline sliding-window capacity")
      ->capture_default_str();
  app.add_option("--min-history", cfg.min_history,
                 "Windows required before the detector arms")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Deterministic generator seed")
      ->capture_default_str();

  // ingest
  std::string snapshots_dir, geodb_path, ingest_out;
  CLI::App* c_ingest =
      app.add_subcommand("ingest", "Aggregate crawl snapshots into count series");
  c_ingest->fallthrough();
  c_ingest->add_option("--snapshots", snapshots_dir, "Directory of snapshot files")
      ->required();
  c_ingest->add_option("--geodb", geodb_path, "Address-range country database")
      ->required();
  c_ingest->add_option("--out", ingest_out, "Output directory for per-entity CSVs")
      ->required();

  // fingerprint
  std::string series_dir, windows_dir, fingerprint_out;
  std::int64_t fp_window_start = 0;
  CLI::App* c_fingerprint = app.add_subcommand(
      "fingerprint", "Turn count series or sampled windows into spectral fingerprints");
  c_fingerprint->fallthrough();
  c_fingerprint->add_option("--series", series_dir, "Directory of count-series CSVs");
  c_fingerprint->add_option("--windows", windows_dir,
                            "Directory of pre-sampled window CSVs");
  c_fingerprint->add_option("--window-start", fp_window_start,
                            "Window start timestamp for --series resampling")
      ->capture_default_str();
  c_fingerprint->add_option("--out", fingerprint_out, "Feature-store output file")
      ->required();

  // analyze
  std::string features_path, analyze_out, basis_in, similarity_in, nn_entity;
  std::string history_dir;
  std::size_t nn_count = 1;
  double cluster_cutoff_value = 0.0;
  std::int64_t an_window_start = 0;
  CLI::App* c_analyze = app.add_subcommand(
      "analyze", "Reduce a feature store and export similarity artifacts");
  c_analyze->fallthrough();
  c_analyze->add_option("--features", features_path, "Feature-store input file");
  c_analyze->add_option("--out", analyze_out, "Output directory");
  c_analyze->add_option("--basis-in", basis_in, "Project onto an existing basis file");
  c_analyze->add_option("--similarity-in", similarity_in,
                        "Serve queries from an existing similarity matrix");
  c_analyze->add_option("--nn", nn_entity, "Print the nearest neighbors of an entity");
  c_analyze->add_option("--nn-count", nn_count, "Number of neighbors for --nn")
      ->capture_default_str();
  CLI::Option* cutoff_opt = c_analyze->add_option(
      "--cluster-cutoff", cluster_cutoff_value, "Print single-linkage groups at a cutoff");
  c_analyze->add_option("--append-history", history_dir,
                        "Append reduced rows to per-entity history files");
  c_analyze->add_option("--window-start", an_window_start,
                        "Window start recorded with --append-history")
      ->capture_default_str();

  // detect
  std::string detect_history, model_path, detect_out;
  CLI::App* c_detect =
      app.add_subcommand("detect", "Replay per-entity histories and emit alarms");
  c_detect->fallthrough();
  c_detect->add_option("--history", detect_history, "Directory of history CSVs")
      ->required();
  c_detect->add_option("--model", model_path, "Optional classifier model file");
  c_detect->add_option("--out", detect_out, "Alarm output file (default stdout)");

  // roc
  std::string scores_path, roc_out;
  CLI::App* c_roc =
      app.add_subcommand("roc", "Sweep thresholds over scored labels into a curve");
  c_roc->fallthrough();
  c_roc->add_option("--scores", scores_path, "CSV of `score,label` rows (label 1 = anomalous)")
      ->required();
  c_roc->add_option("--out", roc_out, "Curve output file (default stdout)");

  // synth
  std::string synth_out;
  std::size_t n_normal = 0, n_anomalous = 0;
  double base_level = 1000.0, noise_sigma = 0.0, weekend_factor = 1.0;
  std::vector<std::string> harmonics, anomalies;
  CLI::App* c_synth =
      app.add_subcommand("synth", "Generate a labelled synthetic window dataset");
  c_synth->fallthrough();
  c_synth->add_option("--out", synth_out, "Dataset output directory")->required();
  c_synth->add_option("--n-normal", n_normal, "Number of clean windows")
      ->capture_default_str();
  c_synth->add_option("--n-anomalous", n_anomalous, "Number of disturbed windows")
      ->capture_default_str();
  c_synth->add_option("--base-level", base_level, "Base signal level")
      ->capture_default_str();
  c_synth->add_option("--noise-sigma", noise_sigma, "Additive Gaussian noise level")
      ->capture_default_str();
  c_synth->add_option("--weekend-factor", weekend_factor,
                      "Level multiplier on the last two days")
      ->capture_default_str();
  c_synth->add_option("--harmonic", harmonics,
                      "Cosine component `index:amplitude:phase` (repeatable)");
  c_synth->add_option("--anomaly", anomalies,
                      "Disturbance `kind:magnitude:start:end` (repeatable)");

  CLI11_PARSE(app, argc, argv);
  cfg.energy_target_set = energy_opt->count() > 0;
  std::optional<double> cluster_cutoff;
  if (cutoff_opt->count() > 0) cluster_cutoff = cluster_cutoff_value;

  try {
    if (*c_ingest) {
      run_ingest(snapshots_dir, geodb_path, ingest_out);
    } else if (*c_fingerprint) {
      run_fingerprint(cfg, series_dir, windows_dir, fp_window_start, fingerprint_out);
    } else if (*c_analyze) {
      run_analyze(cfg, features_path, analyze_out, basis_in, similarity_in, nn_entity,
                  nn_count, cluster_cutoff, history_dir, an_window_start);
    } else if (*c_detect) {
      run_detect(cfg, detect_history, model_path, detect_out);
    } else if (*c_roc) {
      run_roc(scores_path, roc_out);
    } else if (*c_synth) {
      run_synth(cfg, n_normal, n_anomalous, base_level, noise_sigma, weekend_factor,
                harmonics, anomalies, synth_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
