#pragma once

#include <cstdint>
#include <random>

namespace netfp {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the uniform and gaussian mappings are
// implemented here (rather than via <random> distributions, whose algorithms
// are implementation-defined) so that identical seeds give identical streams
// on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1): top 53 bits of one engine draw.
  double uniform01();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via the Box-Muller transform; draws two engine values
  // per pair and caches the second variate.
  double gaussian();

  // Uniform integer in [0, n); floor of uniform01()*n. n must be > 0 and
  // small enough (< 2^53) that the negligible modulo bias is acceptable,
  // which holds for every use in this project (index selection).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace netfp
