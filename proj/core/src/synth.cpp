#include "netfp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "netfp/csv.hpp"
#include "netfp/rng.hpp"

namespace netfp::synth {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void validate_params(const SignalParams& params) {
  if (!(params.base_level > 0.0) || !std::isfinite(params.base_level))
    throw std::runtime_error("generate_weekly: base_level must be positive");
  if (params.noise_sigma < 0.0 || !std::isfinite(params.noise_sigma))
    throw std::runtime_error("generate_weekly: noise_sigma must be non-negative");
  if (params.weekend_factor < 0.0 || !std::isfinite(params.weekend_factor))
    throw std::runtime_error("generate_weekly: weekend_factor must be non-negative");
  for (const Harmonic& harmonic : params.diurnal)
    if (!std::isfinite(harmonic.index) || !std::isfinite(harmonic.amplitude) ||
        !std::isfinite(harmonic.phase))
      throw std::runtime_error("generate_weekly: non-finite harmonic parameters");
}

void validate_spec(const AnomalySpec& spec) {
  if (!(spec.start_fraction >= 0.0) || !(spec.end_fraction <= 1.0) ||
      !(spec.start_fraction < spec.end_fraction))
    throw std::runtime_error("inject_anomaly: span fractions must satisfy 0 <= start < end <= 1");
  if (!std::isfinite(spec.magnitude))
    throw std::runtime_error("inject_anomaly: non-finite magnitude");
  switch (spec.kind) {
    case AnomalyKind::dropout:
      if (spec.magnitude < 0.0 || spec.magnitude >= 1.0)
        throw std::runtime_error("inject_anomaly: dropout magnitude must be in [0, 1)");
      break;
    case AnomalyKind::spike:
      if (spec.magnitude <= 1.0)
        throw std::runtime_error("inject_anomaly: spike magnitude must exceed 1");
      break;
    case AnomalyKind::drift:
      if (spec.magnitude <= 0.0)
        throw std::runtime_error("inject_anomaly: drift magnitude must be positive");
      break;
  }
}

}  // namespace

ingest::EvolutionWindow generate_weekly(const SignalParams& params, std::size_t t,
                                        const std::string& entity, std::int64_t start) {
  if (!is_power_of_two(t))
    throw std::runtime_error("generate_weekly: T must be a power of two, got " +
                             std::to_string(t));
  validate_params(params);

  Rng rng(params.seed);
  ingest::EvolutionWindow window;
  window.entity = entity;
  window.start = start;
  window.span_seconds = static_cast<double>(ingest::kWeekSeconds);
  window.samples.resize(t);

  bool any_positive = false;
  for (std::size_t i = 0; i < t; ++i) {
    // Day index 0..6 across the 7-day window; the last two days carry the
    // weekend factor.
    const std::size_t day = (7 * i) / t;
    const double level =
        params.base_level * (day >= 5 ? params.weekend_factor : 1.0);
    double shape = 1.0;
    for (const Harmonic& harmonic : params.diurnal)
      shape += harmonic.amplitude *
               std::cos(2.0 * std::numbers::pi * harmonic.index *
                            static_cast<double>(i) / static_cast<double>(t) +
                        harmonic.phase);
    double value = level * shape;
    if (params.noise_sigma > 0.0) value += params.noise_sigma * rng.gaussian();
    value = std::max(0.0, value);
    window.samples[i] = value;
    if (value > 0.0) any_positive = true;
  }
  if (!any_positive)
    throw std::runtime_error("generate_weekly: parameters yield an all-zero signal");
  return window;
}

ingest::EvolutionWindow inject_anomaly(const ingest::EvolutionWindow& window,
                                       const AnomalySpec& spec) {
  validate_spec(spec);
  const std::size_t t = window.samples.size();
  const double span_start = spec.start_fraction * static_cast<double>(t);
  const double span_end = spec.end_fraction * static_cast<double>(t);

  ingest::EvolutionWindow out = window;
  for (std::size_t i = 0; i < t; ++i) {
    const double position = static_cast<double>(i);
    if (position < span_start || position >= span_end) continue;
    double factor = spec.magnitude;
    if (spec.kind == AnomalyKind::drift)
      factor = 1.0 + (spec.magnitude - 1.0) * (position - span_start) /
                         (span_end - span_start);
    out.samples[i] = window.samples[i] * factor;
  }
  return out;
}

std::vector<LabelledWindow> make_labelled_dataset(std::size_t n_normal,
                                                  std::size_t n_anomalous,
                                                  const SignalParams& params,
                                                  const std::vector<AnomalySpec>& specs,
                                                  std::uint64_t seed, std::size_t t) {
  if (n_anomalous > 0 && specs.empty())
    throw std::runtime_error("make_labelled_dataset: anomalous windows need specs");
  for (const AnomalySpec& spec : specs) validate_spec(spec);

  Rng master(seed);
  std::vector<LabelledWindow> dataset;
  dataset.reserve(n_normal + n_anomalous);
  for (std::size_t i = 0; i < n_normal + n_anomalous; ++i) {
    std::string suffix = std::to_string(i);
    std::string name =
        "w" + std::string(suffix.size() < 4 ? 4 - suffix.size() : 0, '0') + suffix;
    SignalParams window_params = params;
    window_params.seed = master.next_u64();
    LabelledWindow item;
    item.window = generate_weekly(window_params, t, name);
    if (i >= n_normal) {
      const AnomalySpec& spec = specs[master.below(specs.size())];
      item.window = inject_anomaly(item.window, spec);
      item.label = anomaly::Label::anomalous;
    }
    dataset.push_back(std::move(item));
  }
  return dataset;
}

std::string write_window_csv(const ingest::EvolutionWindow& window) {
  std::string out = window.entity;
  out += ',';
  out += std::to_string(window.start);
  out += ',';
  out += std::to_string(window.samples.size());
  out += '\n';
  for (double sample : window.samples) {
    out += csv::format_double(sample);
    out += '\n';
  }
  return out;
}

ingest::EvolutionWindow read_window_csv(std::string_view text) {
  std::vector<std::string_view> rows;
  for (std::string_view line : csv::lines(text))
    if (!line.empty()) rows.push_back(line);
  if (rows.empty()) throw std::runtime_error("read_window_csv: empty file");

  auto header = csv::split(rows[0]);
  if (header.size() != 3)
    throw std::runtime_error("read_window_csv: header must be 'entity,start,T'");
  ingest::EvolutionWindow window;
  window.entity = std::string(header[0]);
  if (window.entity.empty())
    throw std::runtime_error("read_window_csv: empty entity");
  window.start = csv::parse_int64(header[1], "read_window_csv");
  const std::uint64_t t = csv::parse_uint64(header[2], "read_window_csv");
  window.span_seconds = static_cast<double>(ingest::kWeekSeconds);
  if (rows.size() - 1 != t)
    throw std::runtime_error("read_window_csv: expected " + std::to_string(t) +
                             " samples, found " + std::to_string(rows.size() - 1));
  window.samples.reserve(t);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double value = csv::parse_double(rows[i], "read_window_csv");
    if (!std::isfinite(value) || value < 0.0)
      throw std::runtime_error("read_window_csv: sample " + std::to_string(i - 1) +
                               " must be finite and non-negative");
    window.samples.push_back(value);
  }
  return window;
}

std::string write_labels_csv(const std::vector<LabelledWindow>& dataset) {
  std::string out;
  for (const LabelledWindow& item : dataset) {
    out += item.window.entity;
    out += ',';
    out += item.label == anomaly::Label::normal ? "normal" : "anomalous";
    out += '\n';
  }
  return out;
}

std::vector<std::pair<std::string, anomaly::Label>> read_labels_csv(std::string_view text) {
  std::vector<std::pair<std::string, anomaly::Label>> labels;
  std::size_t line_number = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 2)
      throw std::runtime_error("read_labels_csv: line " + std::to_string(line_number) +
                               ": expected 'entity,label'");
    anomaly::Label label;
    if (fields[1] == "normal")
      label = anomaly::Label::normal;
    else if (fields[1] == "anomalous")
      label = anomaly::Label::anomalous;
    else
      throw std::runtime_error("read_labels_csv: line " + std::to_string(line_number) +
                               ": unknown label '" + std::string(fields[1]) + "'");
    labels.emplace_back(std::string(fields[0]), label);
  }
  return labels;
}

}  // namespace netfp::synth
