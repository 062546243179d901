// Discrete Fourier transform and the normalized amplitude-spectrum
// fingerprint of an evolution window.
#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "netfp/ingest.hpp"

namespace netfp::spectrum {

using ComplexVector = std::vector<std::complex<double>>;

// Unit-norm amplitude spectrum of one entity's window; the entity's
// frequency-domain signature.
struct FeatureVector {
  std::string entity;
  std::vector<double> amplitudes;
};

// Unnormalized forward DFT, X[k] = sum_t x[t]*exp(-i*2*pi*k*t/T), computed
// with an iterative radix-2 decimation-in-time FFT. Length must be a power
// of two (>= 1).
ComplexVector fft(const ComplexVector& x);

// Same transform as a direct O(T^2) double sum; any length >= 1. Serves as
// the oracle for fft and errors never.
ComplexVector naive_dft(const ComplexVector& x);

// amplitudes[k] = |X[k]| / ||X||. The normalization cancels overall scale,
// so only the all-zero window (zero spectrum) is rejected.
FeatureVector fingerprint(const ingest::EvolutionWindow& window);

// Feature store: one row per entity, `entity,a0,...,a{T-1}`.
std::string write_feature_store(const std::vector<FeatureVector>& features);
std::vector<FeatureVector> read_feature_store(std::string_view text);

}  // namespace netfp::spectrum
