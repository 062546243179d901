// Singular value decomposition of the feature matrix, energy accounting,
// and projection onto the leading principal components.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netfp/matrix.hpp"
#include "netfp/spectrum.hpp"

namespace netfp::reduction {

// Feature vectors stacked as columns: data is T x w, column i belongs to
// entities[i].
struct FeatureMatrix {
  std::vector<std::string> entities;
  Matrix data;
};

struct SvdResult {
  Matrix u;                            // T x r, orthonormal columns
  std::vector<double> singular_values; // length r = min(T, w), descending
  Matrix v;                            // w x r, orthonormal columns
};

// The k retained left singular vectors plus the full singular spectrum for
// energy accounting.
struct Basis {
  Matrix vectors;                      // T x k
  std::vector<double> singular_values; // full set, descending
};

struct ReducedFeature {
  std::string entity;
  std::vector<double> coords;
};

FeatureMatrix make_feature_matrix(const std::vector<spectrum::FeatureVector>& features);

// Thin SVD via one-sided Jacobi rotations. M = U * diag(s) * V^T with
// orthonormal U, V columns and s sorted descending. Sign convention: the
// largest-magnitude entry of each U column is non-negative, so repeated
// runs serialize identically.
SvdResult svd(const Matrix& m);

// Fraction of total squared singular mass carried by the first k values.
double energy_fraction(std::span<const double> singular_values, std::size_t k);

// Smallest k whose energy fraction reaches `target`, clamped to the number
// of positive singular values.
std::size_t choose_k(std::span<const double> singular_values, double target);

// First k left singular vectors of the decomposition.
Basis make_basis(const SvdResult& svd_result, std::size_t k);

// coords_i = vectors^T * column_i.
std::vector<ReducedFeature> project(const FeatureMatrix& features, const Basis& basis);

// Basis persistence: header `k,T`, then k rows of T coefficients (row i is
// singular vector i). Singular values travel separately as one CSV row.
std::string write_basis_csv(const Basis& basis);
Basis read_basis_csv(std::string_view text);
std::string write_singular_values_csv(std::span<const double> singular_values);
std::vector<double> read_singular_values_csv(std::string_view text);

// Reduced features: one row per entity, `entity,c0,...,c{k-1}`.
std::string write_reduced_csv(const std::vector<ReducedFeature>& features);
std::vector<ReducedFeature> read_reduced_csv(std::string_view text);

}  // namespace netfp::reduction
