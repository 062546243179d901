// Synthetic weekly-periodic network-evolution signals with controllable
// harmonic structure, noise, and injected anomalies.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "netfp/anomaly.hpp"
#include "netfp/ingest.hpp"

namespace netfp::synth {

// One cosine component. Harmonic h counts cycles per 7-day window, so h=7
// is daily periodicity and h=1 is the weekly fundamental.
struct Harmonic {
  double index = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct SignalParams {
  double base_level = 1000.0;
  std::vector<Harmonic> diurnal;
  double weekend_factor = 1.0;  // level multiplier on the last two days
  double noise_sigma = 0.0;     // additive Gaussian, absolute units
  std::uint64_t seed = 0;
};

enum class AnomalyKind { dropout, spike, drift };

// Multiplicative disturbance over [start_fraction, end_fraction) of the
// window. Dropout needs magnitude in [0, 1), spike > 1; drift ramps the
// factor linearly from 1 to magnitude (> 0) across the span.
struct AnomalySpec {
  AnomalyKind kind = AnomalyKind::dropout;
  double magnitude = 0.0;
  double start_fraction = 0.0;
  double end_fraction = 0.0;
};

struct LabelledWindow {
  ingest::EvolutionWindow window;
  anomaly::Label label = anomaly::Label::normal;
};

// samples[t] = max(0, level(t) * (1 + sum_h a_h cos(2 pi h t / T + phi_h))
//                   + noise_sigma * gauss), deterministic given the seed.
ingest::EvolutionWindow generate_weekly(const SignalParams& params, std::size_t t,
                                        const std::string& entity = "synthetic",
                                        std::int64_t start = 0);

// Applies the spec's factor to samples with start_fraction*T <= i <
// end_fraction*T; everything else is untouched.
ingest::EvolutionWindow inject_anomaly(const ingest::EvolutionWindow& window,
                                       const AnomalySpec& spec);

// n_normal clean windows followed by n_anomalous windows that each apply
// one spec drawn from `specs`. Entities are named w0000, w0001, ...;
// deterministic given the seed.
std::vector<LabelledWindow> make_labelled_dataset(std::size_t n_normal,
                                                  std::size_t n_anomalous,
                                                  const SignalParams& params,
                                                  const std::vector<AnomalySpec>& specs,
                                                  std::uint64_t seed, std::size_t t);

// Window persistence: header `entity,start,T`, then T sample rows.
std::string write_window_csv(const ingest::EvolutionWindow& window);
ingest::EvolutionWindow read_window_csv(std::string_view text);

// Manifest: `entity,label` rows with label "normal" or "anomalous".
std::string write_labels_csv(const std::vector<LabelledWindow>& dataset);
std::vector<std::pair<std::string, anomaly::Label>> read_labels_csv(std::string_view text);

}  // namespace netfp::synth
