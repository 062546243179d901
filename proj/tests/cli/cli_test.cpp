#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

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

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_root() {
  static fs::path root = [] {
    fs::path dir = fs::temp_directory_path() /
                   ("netfp_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
  }();
  return root;
}

fs::path scratch(const std::string& name) {
  static int counter = 0;
  fs::path dir = scratch_root() / (name + "_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out_file = scratch_root() / ("stdout_" + std::to_string(counter));
  fs::path err_file = scratch_root() / ("stderr_" + std::to_string(counter));
  ++counter;
  std::string command = std::string(NETFP_CLI_PATH) + " " + args + " >" +
                        out_file.string() + " 2>" + err_file.string();
  int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = csv::read_file(out_file.string());
  result.err = csv::read_file(err_file.string());
  return result;
}

// Relative path -> content for every regular file under `dir`.
std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> tree;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      tree[fs::relative(entry.path(), dir).string()] =
          csv::read_file(entry.path().string());
  return tree;
}

void write(const fs::path& path, const std::string& content) {
  csv::write_file(path.string(), content);
}

// Geodb with a single AU block covering 1.0.0.0 - 1.0.0.255.
const char* kGeoDb = "16777216,16777471,AU\n";

}  // namespace

TEST_CASE("ingest writes one series file per entity plus the total") {
  fs::path dir = scratch("ingest_basic");
  fs::path snaps = dir / "snaps";
  fs::create_directories(snaps);
  write(snaps / "a.csv", "1000,1.0.0.1\n1000,9.9.9.9\n");
  write(snaps / "b.csv", "2000,1.0.0.2\n");
  write(dir / "geo.csv", kGeoDb);
  fs::path out = dir / "series";

  RunResult r = run_cli("ingest --snapshots " + snaps.string() + " --geodb " +
                        (dir / "geo.csv").string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.err.empty());

  std::set<std::string> names;
  for (const auto& entry : fs::directory_iterator(out))
    names.insert(entry.path().filename().string());
  CHECK(names == std::set<std::string>{"ALL.csv", "AU.csv", "ZZ.csv"});

  ingest::CountSeries all = ingest::read_series_csv(csv::read_file((out / "ALL.csv").string()));
  REQUIRE(all.points.size() == 2);
  CHECK(all.points[0].count == 2);
  CHECK(all.points[1].count == 1);
  ingest::CountSeries zz = ingest::read_series_csv(csv::read_file((out / "ZZ.csv").string()));
  CHECK(zz.points[0].count == 1);
  CHECK(zz.points[1].count == 0);

  // Summary on stdout: entity, points, total observations.
  CHECK(r.out.find("ALL,2,3") != std::string::npos);
  CHECK(r.out.find("AU,2,2") != std::string::npos);
  CHECK(r.out.find("ZZ,2,1") != std::string::npos);
}

TEST_CASE("ingest rejects an empty snapshot directory") {
  fs::path dir = scratch("ingest_empty");
  fs::path snaps = dir / "snaps";
  fs::create_directories(snaps);
  write(dir / "geo.csv", kGeoDb);
  RunResult r = run_cli("ingest --snapshots " + snaps.string() + " --geodb " +
                        (dir / "geo.csv").string() + " --out " + (dir / "o").string());
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("no snapshots") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("ingest counts match a manual per-snapshot set oracle") {
  fs::path dir = scratch("ingest_oracle");
  fs::path snaps = dir / "snaps";
  fs::create_directories(snaps);
  // Five snapshots with duplicate addresses inside snapshots.
  std::vector<std::vector<std::string>> peers = {
      {"1.0.0.1", "1.0.0.1", "1.0.0.7"},
      {"1.0.0.2", "8.8.8.8"},
      {"9.9.9.9", "9.9.9.9", "9.9.9.9"},
      {"1.0.0.3", "1.0.0.3", "1.0.0.4", "7.7.7.7"},
      {"1.0.0.5"}};
  for (std::size_t i = 0; i < peers.size(); ++i) {
    std::string text;
    for (const std::string& ip : peers[i])
      text += std::to_string(1000 + 100 * i) + "," + ip + "\n";
    write(snaps / ("s" + std::to_string(i) + ".csv"), text);
  }
  write(dir / "geo.csv", kGeoDb);
  fs::path out = dir / "series";
  RunResult r = run_cli("ingest --snapshots " + snaps.string() + " --geodb " +
                        (dir / "geo.csv").string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);

  // Manual oracle: per snapshot, the count of an entity is the number of
  // distinct addresses geolocating to it (ALL counts all distinct).
  ingest::GeoDb db = ingest::load_geodb(kGeoDb);
  std::map<std::string, std::vector<std::uint64_t>> expected;
  for (const std::string& entity : {"ALL", "AU", "ZZ"})
    expected[entity] = std::vector<std::uint64_t>(peers.size(), 0);
  for (std::size_t i = 0; i < peers.size(); ++i) {
    std::map<std::string, std::set<std::string>> sets;
    for (const std::string& ip : peers[i]) {
      sets["ALL"].insert(ip);
      sets[std::string(ingest::geolocate(db, ingest::parse_ipv4(ip)))].insert(ip);
    }
    for (const auto& [entity, uniq] : sets) expected[entity][i] = uniq.size();
  }
  for (const auto& [entity, counts] : expected) {
    ingest::CountSeries series =
        ingest::read_series_csv(csv::read_file((out / (entity + ".csv")).string()));
    REQUIRE(series.points.size() == counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
      CHECK(series.points[i].count == counts[i]);
  }
}

TEST_CASE("fingerprint maps a constant series to the pure-DC row") {
  fs::path dir = scratch("fp_constant");
  fs::path series = dir / "series";
  fs::create_directories(series);
  // Constant count bracketing a full week from 0.
  write(series / "AU.csv", "AU,0,5\nAU,604800,5\n");
  fs::path out = dir / "store.csv";
  RunResult r = run_cli("fingerprint --series " + series.string() +
                        " --window-start 0 --t 8 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  auto store = spectrum::read_feature_store(csv::read_file(out.string()));
  REQUIRE(store.size() == 1);
  CHECK(store[0].entity == "AU");
  CHECK(store[0].amplitudes[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k < 8; ++k)
    CHECK(store[0].amplitudes[k] == doctest::Approx(0.0).epsilon(1e-12));

  // Rerun is byte-identical.
  fs::path out2 = dir / "store2.csv";
  RunResult r2 = run_cli("fingerprint --series " + series.string() +
                         " --window-start 0 --t 8 --out " + out2.string());
  REQUIRE(r2.exit_code == 0);
  CHECK(csv::read_file(out.string()) == csv::read_file(out2.string()));
}

TEST_CASE("fingerprint skips entities with insufficient data but fails on zero") {
  fs::path dir = scratch("fp_skip");
  fs::path series = dir / "series";
  fs::create_directories(series);
  write(series / "AU.csv", "AU,0,5\nAU,604800,7\n");
  write(series / "BR.csv", "BR,100,3\n");  // single point: unusable
  fs::path out = dir / "store.csv";
  RunResult r = run_cli("fingerprint --series " + series.string() +
                        " --window-start 0 --t 8 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.err.find("BR") != std::string::npos);
  auto store = spectrum::read_feature_store(csv::read_file(out.string()));
  REQUIRE(store.size() == 1);
  CHECK(store[0].entity == "AU");

  fs::path lonely = dir / "lonely";
  fs::create_directories(lonely);
  write(lonely / "BR.csv", "BR,100,3\n");
  RunResult r2 = run_cli("fingerprint --series " + lonely.string() +
                         " --window-start 0 --t 8 --out " + (dir / "x.csv").string());
  CHECK(r2.exit_code != 0);
  CHECK(r2.err.find("no usable entities") != std::string::npos);
}

TEST_CASE("fingerprint on a synthetic corpus equals direct library calls") {
  fs::path dir = scratch("fp_synth");
  fs::path data = dir / "data";
  RunResult s = run_cli(
      "synth --out " + data.string() +
      " --n-normal 4 --n-anomalous 2 --t 64 --seed 11 --base-level 1000"
      " --noise-sigma 20 --harmonic 7:0.45:0.3 --harmonic 14:0.2:1.1"
      " --anomaly dropout:0.5:0.4:0.6");
  REQUIRE(s.exit_code == 0);

  fs::path out = dir / "store.csv";
  RunResult r = run_cli("fingerprint --windows " + data.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);

  std::vector<spectrum::FeatureVector> expected;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(data))
    if (entry.path().filename() != "labels.csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files)
    expected.push_back(
        spectrum::fingerprint(synth::read_window_csv(csv::read_file(f.string()))));
  CHECK(csv::read_file(out.string()) == spectrum::write_feature_store(expected));
}

TEST_CASE("config file supplies defaults and flags win over it") {
  fs::path dir = scratch("config");
  fs::path series = dir / "series";
  fs::create_directories(series);
  write(series / "AU.csv", "AU,0,5\nAU,604800,9\n");
  write(dir / "cfg.toml", "t = 16\n");

  fs::path out16 = dir / "s16.csv";
  RunResult a = run_cli("fingerprint --config " + (dir / "cfg.toml").string() +
                        " --series " + series.string() + " --out " + out16.string());
  REQUIRE(a.exit_code == 0);
  CHECK(spectrum::read_feature_store(csv::read_file(out16.string()))[0].amplitudes.size() == 16);

  fs::path out8 = dir / "s8.csv";
  RunResult b = run_cli("fingerprint --config " + (dir / "cfg.toml").string() +
                        " --t 8 --series " + series.string() + " --out " + out8.string());
  REQUIRE(b.exit_code == 0);
  CHECK(spectrum::read_feature_store(csv::read_file(out8.string()))[0].amplitudes.size() == 8);
}

TEST_CASE("analyze on two identical entities produces a zero matrix") {
  fs::path dir = scratch("an_identical");
  spectrum::FeatureVector f1{"AA", {1.0, 0.0, 0.0, 0.0}};
  spectrum::FeatureVector f2{"BB", {1.0, 0.0, 0.0, 0.0}};
  fs::path store = dir / "store.csv";
  write(store, spectrum::write_feature_store({f1, f2}));
  fs::path out = dir / "out";
  RunResult r = run_cli("analyze --features " + store.string() + " --k 2 --out " +
                        out.string());
  REQUIRE(r.exit_code == 0);
  // Rank is 1, so k must be clamped with a warning and scatter skipped.
  CHECK(r.err.find("clamped") != std::string::npos);

  similarity::SimilarityMatrix s =
      similarity::read_similarity_csv(csv::read_file((out / "similarity.csv").string()));
  REQUIRE(s.entities == std::vector<std::string>{"AA", "BB"});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(s.values(a, b) == 0.0);
}

TEST_CASE("analyze rejects fewer than two entities") {
  fs::path dir = scratch("an_single");
  fs::path store = dir / "store.csv";
  write(store, spectrum::write_feature_store({{"AA", {1.0, 0.0}}}));
  RunResult r = run_cli("analyze --features " + store.string() + " --out " +
                        (dir / "out").string());
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("at least 2 entities") != std::string::npos);
}

TEST_CASE("analyze passthrough serves queries from a stored matrix") {
  std::string fixture = std::string(NETFP_FIXTURE_DIR) + "/country_distances.csv";
  RunResult r = run_cli("analyze --similarity-in " + fixture + " --nn US --nn-count 2");
  REQUIRE(r.exit_code == 0);
  std::string expected = "IL," + csv::format_double(0.22) + "\nCA," +
                         csv::format_double(0.39) + "\n";
  CHECK(r.out == expected);

  RunResult g = run_cli("analyze --similarity-in " + fixture + " --cluster-cutoff 0.45");
  REQUIRE(g.exit_code == 0);
  CHECK(g.out.find("CA,IL,US\n") != std::string::npos);

  RunResult bad = run_cli("analyze --similarity-in " + fixture + " --nn XX");
  CHECK(bad.exit_code != 0);
  CHECK(bad.err.find("XX") != std::string::npos);
}

TEST_CASE("analyze matches an end-to-end library oracle on a synthetic corpus") {
  fs::path dir = scratch("an_oracle");
  fs::path data = dir / "data";
  RunResult s = run_cli("synth --out " + data.string() +
                        " --n-normal 12 --t 64 --seed 3 --base-level 1000"
                        " --noise-sigma 15 --harmonic 7:0.5:0.2 --harmonic 21:0.2:1.0");
  REQUIRE(s.exit_code == 0);
  fs::path store = dir / "store.csv";
  REQUIRE(run_cli("fingerprint --windows " + data.string() + " --out " + store.string())
              .exit_code == 0);
  fs::path out = dir / "out";
  RunResult r = run_cli("analyze --features " + store.string() + " --k 6 --out " +
                        out.string());
  REQUIRE(r.exit_code == 0);

  auto features = spectrum::read_feature_store(csv::read_file(store.string()));
  reduction::FeatureMatrix matrix = reduction::make_feature_matrix(features);
  reduction::SvdResult decomposition = reduction::svd(matrix.data);
  reduction::Basis basis = reduction::make_basis(decomposition, 6);
  auto reduced = reduction::project(matrix, basis);
  similarity::SimilarityMatrix expected = similarity::pdist(reduced);

  CHECK(csv::read_file((out / "similarity.csv").string()) ==
        similarity::write_similarity_csv(expected));
  CHECK(csv::read_file((out / "basis.csv").string()) ==
        reduction::write_basis_csv(basis));
  CHECK(csv::read_file((out / "reduced.csv").string()) ==
        reduction::write_reduced_csv(reduced));
  CHECK(csv::read_file((out / "singular_values.csv").string()) ==
        reduction::write_singular_values_csv(decomposition.singular_values));
  CHECK(fs::exists(out / "scatter.csv"));
}

TEST_CASE("detect stays silent on eight identical weeks") {
  fs::path dir = scratch("detect_quiet");
  fs::path hist = dir / "hist";
  fs::create_directories(hist);
  std::string rows;
  for (int week = 0; week < 8; ++week)
    rows += std::to_string(week * 604800) + "," + csv::format_double(0.5) + "," +
            csv::format_double(-0.25) + "\n";
  write(hist / "AU.csv", rows);
  fs::path out = dir / "alarms.jsonl";
  RunResult r = run_cli("detect --history " + hist.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(csv::read_file(out.string()).empty());
}

TEST_CASE("detect pipeline: eight normal weeks then a dropout week alarms once") {
  fs::path dir = scratch("detect_pipeline");

  // A 40-window corpus (30 normal + 10 anomalous) fixes the shared basis so
  // weekly projections are comparable.
  fs::path corpus = dir / "corpus";
  std::string family =
      " --base-level 1000 --noise-sigma 20 --harmonic 7:0.45:0.3"
      " --harmonic 14:0.2:1.1 --weekend-factor 1.3 --t 256";
  REQUIRE(run_cli("synth --out " + corpus.string() +
                  " --n-normal 30 --n-anomalous 10 --seed 7" + family +
                  " --anomaly dropout:0.5:0.4:0.6 --anomaly spike:2.0:0.1:0.3")
              .exit_code == 0);
  fs::path corpus_store = dir / "corpus_store.csv";
  REQUIRE(run_cli("fingerprint --windows " + corpus.string() + " --out " +
                  corpus_store.string())
              .exit_code == 0);
  fs::path basis_dir = dir / "basis";
  REQUIRE(run_cli("analyze --features " + corpus_store.string() + " --k 8 --out " +
                  basis_dir.string())
              .exit_code == 0);
  std::string basis_path = (basis_dir / "basis.csv").string();

  // Nine weeks, two entities; entity w0001 suffers a dropout in week 8.
  fs::path hist = dir / "hist";
  for (int week = 0; week < 9; ++week) {
    fs::path weekly = dir / ("week_" + std::to_string(week));
    std::string synth_args = "synth --out " + weekly.string() + " --seed " +
                             std::to_string(100 + week) + family;
    if (week == 8)
      synth_args += " --n-normal 1 --n-anomalous 1 --anomaly dropout:0.5:0.4:0.6";
    else
      synth_args += " --n-normal 2";
    REQUIRE(run_cli(synth_args).exit_code == 0);

    fs::path store = dir / ("store_" + std::to_string(week) + ".csv");
    REQUIRE(run_cli("fingerprint --windows " + weekly.string() + " --out " +
                    store.string())
                .exit_code == 0);
    REQUIRE(run_cli("analyze --features " + store.string() + " --basis-in " +
                    basis_path + " --out " + (dir / "scratch_out").string() +
                    " --append-history " + hist.string() + " --window-start " +
                    std::to_string(week * 604800))
                .exit_code == 0);
  }

  fs::path alarms_path = dir / "alarms.jsonl";
  RunResult r = run_cli("detect --history " + hist.string() + " --out " +
                        alarms_path.string());
  REQUIRE(r.exit_code == 0);
  auto alarms = anomaly::read_alarms_jsonl(csv::read_file(alarms_path.string()));
  REQUIRE(alarms.size() == 1);
  CHECK(alarms[0].entity == "w0001");
  CHECK(alarms[0].window_start == 8 * 604800);
  CHECK(alarms[0].indicator > alarms[0].threshold);
  CHECK(alarms[0].source == anomaly::AlarmSource::threshold);

  // A model adds classifier records without touching threshold alarms.
  anomaly::NBModel model;
  model.prior_normal = 0.5;
  model.prior_anomalous = 0.5;
  // Feature is [indicator, first 8 deviation components]: big indicator means
  // anomalous, so give the classes well-separated indicator means.
  model.mean_normal = std::vector<double>(9, 0.0);
  model.mean_anomalous = std::vector<double>(9, 0.0);
  model.mean_anomalous[0] = 0.05;
  model.var_normal = std::vector<double>(9, 1e-4);
  model.var_anomalous = std::vector<double>(9, 1e-2);
  fs::path model_path = dir / "model.csv";
  write(model_path, anomaly::write_nb_csv(model));

  fs::path alarms2_path = dir / "alarms2.jsonl";
  RunResult r2 = run_cli("detect --history " + hist.string() + " --model " +
                         model_path.string() + " --out " + alarms2_path.string());
  REQUIRE(r2.exit_code == 0);
  auto with_model = anomaly::read_alarms_jsonl(csv::read_file(alarms2_path.string()));
  std::vector<anomaly::Alarm> threshold_only;
  for (const auto& alarm : with_model)
    if (alarm.source == anomaly::AlarmSource::threshold) threshold_only.push_back(alarm);
  REQUIRE(threshold_only.size() == alarms.size());
  for (std::size_t i = 0; i < alarms.size(); ++i) {
    CHECK(threshold_only[i].entity == alarms[i].entity);
    CHECK(threshold_only[i].window_start == alarms[i].window_start);
    CHECK(threshold_only[i].indicator == alarms[i].indicator);
  }
  bool classifier_hit = false;
  for (const auto& alarm : with_model)
    if (alarm.source == anomaly::AlarmSource::classifier &&
        alarm.entity == "w0001" && alarm.window_start == 8 * 604800)
      classifier_hit = true;
  CHECK(classifier_hit);
}

TEST_CASE("detect rejects corrupt history naming the file") {
  fs::path dir = scratch("detect_corrupt");
  fs::path hist = dir / "hist";
  fs::create_directories(hist);
  write(hist / "AU.csv", "0,1.0\n604800,not-a-number\n");
  RunResult r = run_cli("detect --history " + hist.string());
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("AU.csv") != std::string::npos);

  write(hist / "AU.csv", "604800,1.0\n0,1.0\n");  // not chronological
  RunResult r2 = run_cli("detect --history " + hist.string());
  CHECK(r2.exit_code != 0);
  CHECK(r2.err.find("increasing") != std::string::npos);
}

TEST_CASE("roc matches the library and rejects single-class input") {
  fs::path dir = scratch("roc");
  fs::path scores = dir / "scores.csv";
  write(scores, "0.1,0\n0.9,1\n0.4,0\n0.8,1\n0.4,1\n");
  fs::path out = dir / "roc.csv";
  RunResult r = run_cli("roc --scores " + scores.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);

  std::vector<double> s = {0.1, 0.9, 0.4, 0.8, 0.4};
  std::vector<anomaly::Label> l = {anomaly::Label::normal, anomaly::Label::anomalous,
                                   anomaly::Label::normal, anomaly::Label::anomalous,
                                   anomaly::Label::anomalous};
  CHECK(csv::read_file(out.string()) == anomaly::write_roc_csv(anomaly::roc(s, l)));

  // Without --out the curve goes to stdout.
  RunResult piped = run_cli("roc --scores " + scores.string());
  REQUIRE(piped.exit_code == 0);
  CHECK(piped.out == anomaly::write_roc_csv(anomaly::roc(s, l)));

  write(scores, "0.1,0\n0.2,0\n");
  RunResult bad = run_cli("roc --scores " + scores.string());
  CHECK(bad.exit_code != 0);
  CHECK(!bad.err.empty());
}

TEST_CASE("synth writes deterministic datasets with a faithful manifest") {
  fs::path dir = scratch("synth");

  // n = 0: just an empty manifest.
  fs::path empty = dir / "empty";
  RunResult z = run_cli("synth --out " + empty.string() + " --t 32");
  REQUIRE(z.exit_code == 0);
  auto tree = read_tree(empty);
  REQUIRE(tree.size() == 1);
  CHECK(tree.count("labels.csv") == 1);
  CHECK(tree["labels.csv"].empty());

  std::string args =
      " --n-normal 3 --n-anomalous 2 --t 64 --seed 21 --base-level 500"
      " --noise-sigma 10 --harmonic 7:0.4:0.1 --anomaly spike:2.5:0.2:0.5";
  fs::path a = dir / "a";
  fs::path b = dir / "b";
  REQUIRE(run_cli("synth --out " + a.string() + args).exit_code == 0);
  REQUIRE(run_cli("synth --out " + b.string() + args).exit_code == 0);
  CHECK(read_tree(a) == read_tree(b));

  auto labels = synth::read_labels_csv(csv::read_file((a / "labels.csv").string()));
  REQUIRE(labels.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(labels[i].first == "w000" + std::to_string(i));
    CHECK(labels[i].second ==
          (i < 3 ? anomaly::Label::normal : anomaly::Label::anomalous));
  }
  // Window files exist for every manifest entry.
  for (const auto& [entity, label] : labels) CHECK(fs::exists(a / (entity + ".csv")));

  RunResult bad = run_cli("synth --out " + (dir / "bad").string() +
                          " --n-normal 0 --n-anomalous 1 --t 32");
  CHECK(bad.exit_code != 0);  // anomalies need at least one spec
}
