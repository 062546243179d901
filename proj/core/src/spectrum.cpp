#include "netfp/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "netfp/csv.hpp"

namespace netfp::spectrum {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_finite(const ComplexVector& x, std::string_view context) {
  for (const std::complex<double>& value : x)
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw std::runtime_error(std::string(context) + ": non-finite input");
}

}  // namespace

ComplexVector fft(const ComplexVector& x) {
  const std::size_t n = x.size();
  if (!is_power_of_two(n))
    throw std::runtime_error("fft: length must be a power of two, got " +
                             std::to_string(n));
  check_finite(x, "fft");

  ComplexVector out(n);
  // Bit-reversal permutation, then in-place butterflies over doubling
  // block sizes (decimation in time).
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rev = 0;
    for (std::size_t bit = 0; bit < log2n; ++bit)
      if (i & (std::size_t{1} << bit)) rev |= std::size_t{1} << (log2n - 1 - bit);
    out[rev] = x[i];
  }

  // Twiddle table e^{-i 2 pi j / n} for j in [0, n/2); stage `len` reads it
  // at stride n/len.
  const double base = -2.0 * std::numbers::pi / static_cast<double>(n);
  ComplexVector twiddles(n / 2);
  for (std::size_t j = 0; j < twiddles.size(); ++j)
    twiddles[j] = std::complex<double>(std::cos(base * static_cast<double>(j)),
                                       std::sin(base * static_cast<double>(j)));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t m = 0; m < half; ++m) {
        const std::complex<double> odd = twiddles[m * stride] * out[start + m + half];
        const std::complex<double> even = out[start + m];
        out[start + m] = even + odd;
        out[start + m + half] = even - odd;
      }
    }
  }
  return out;
}

ComplexVector naive_dft(const ComplexVector& x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::runtime_error("naive_dft: empty input");
  check_finite(x, "naive_dft");
  ComplexVector out(n);
  const double base = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      // Reduce k*t modulo n before forming the angle; at T = 2048 the
      // product reaches ~4e6 and the reduced angle keeps the oracle at
      // full double accuracy.
      const std::size_t phase_index = (k * t) % n;
      const double angle = base * static_cast<double>(phase_index);
      sum += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = sum;
  }
  return out;
}

FeatureVector fingerprint(const ingest::EvolutionWindow& window) {
  if (window.samples.empty())
    throw std::runtime_error("fingerprint: empty window");
  ComplexVector x(window.samples.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(window.samples[i]))
      throw std::runtime_error("fingerprint: non-finite sample in window of '" +
                               window.entity + "'");
    x[i] = std::complex<double>(window.samples[i], 0.0);
  }
  ComplexVector transformed = fft(x);

  FeatureVector feature;
  feature.entity = window.entity;
  feature.amplitudes.resize(transformed.size());
  double sum_squares = 0.0;
  for (std::size_t k = 0; k < transformed.size(); ++k) {
    const double amplitude = std::abs(transformed[k]);
    feature.amplitudes[k] = amplitude;
    sum_squares += amplitude * amplitude;
  }
  if (sum_squares <= 0.0)
    throw std::runtime_error("fingerprint: degenerate all-zero window for '" +
                             window.entity + "'");
  const double norm = std::sqrt(sum_squares);
  for (double& amplitude : feature.amplitudes) amplitude /= norm;
  return feature;
}

std::string write_feature_store(const std::vector<FeatureVector>& features) {
  std::string out;
  for (const FeatureVector& feature : features) {
    out += feature.entity;
    for (double amplitude : feature.amplitudes) {
      out += ',';
      out += csv::format_double(amplitude);
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureVector> read_feature_store(std::string_view text) {
  std::vector<FeatureVector> features;
  std::size_t line_number = 0;
  std::size_t width = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() < 2)
      throw std::runtime_error("read_feature_store: line " + std::to_string(line_number) +
                               ": expected 'entity,a0,...'");
    FeatureVector feature;
    feature.entity = std::string(fields[0]);
    feature.amplitudes.reserve(fields.size() - 1);
    double sum_squares = 0.0;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double amplitude = csv::parse_double(fields[i], "read_feature_store");
      if (amplitude < 0.0)
        throw std::runtime_error("read_feature_store: line " + std::to_string(line_number) +
                                 ": negative amplitude");
      feature.amplitudes.push_back(amplitude);
      sum_squares += amplitude * amplitude;
    }
    if (width == 0)
      width = feature.amplitudes.size();
    else if (feature.amplitudes.size() != width)
      throw std::runtime_error("read_feature_store: line " + std::to_string(line_number) +
                               ": inconsistent row length");
    if (std::abs(std::sqrt(sum_squares) - 1.0) > 1e-9)
      throw std::runtime_error("read_feature_store: line " + std::to_string(line_number) +
                               ": row of '" + feature.entity + "' is not unit-norm");
    features.push_back(std::move(feature));
  }
  if (features.empty()) throw std::runtime_error("read_feature_store: empty store");
  return features;
}

}  // namespace netfp::spectrum
