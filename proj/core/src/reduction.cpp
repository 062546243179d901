#include "netfp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "netfp/csv.hpp"

namespace netfp::reduction {

namespace {

// One-sided Jacobi on a matrix with rows >= cols: rotates column pairs
// until mutually orthogonal. Returns U (rows x cols, orthonormal), the
// column norms as singular values, and the accumulated rotations V
// (cols x cols). Descending order and the sign convention are applied by
// the caller.
struct JacobiResult {
  Matrix u;
  std::vector<double> s;
  Matrix v;
};

JacobiResult one_sided_jacobi(Matrix a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();

  Matrix v(cols, cols);
  for (std::size_t i = 0; i < cols; ++i) v(i, i) = 1.0;

  constexpr double kOrthoTol = 1e-14;
  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double* ap = a.col(p);
        double* aq = a.col(q);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          alpha += ap[r] * ap[r];
          beta += aq[r] * aq[r];
          gamma += ap[r] * aq[r];
        }
        if (std::abs(gamma) <= kOrthoTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Jacobi rotation zeroing the (p,q) off-diagonal of A^T A.
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < rows; ++r) {
          const double vp = ap[r];
          const double vq = aq[r];
          ap[r] = c * vp - s * vq;
          aq[r] = s * vp + c * vq;
        }
        double* vp_col = v.col(p);
        double* vq_col = v.col(q);
        for (std::size_t r = 0; r < cols; ++r) {
          const double vp = vp_col[r];
          const double vq = vq_col[r];
          vp_col[r] = c * vp - s * vq;
          vq_col[r] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  JacobiResult result{std::move(a), std::vector<double>(cols, 0.0), std::move(v)};
  for (std::size_t c = 0; c < cols; ++c) {
    double norm_sq = 0.0;
    const double* column = result.u.col(c);
    for (std::size_t r = 0; r < rows; ++r) norm_sq += column[r] * column[r];
    result.s[c] = std::sqrt(norm_sq);
  }
  return result;
}

// Normalizes U's columns; columns whose singular value underflows are
// rebuilt by Gram-Schmidt so U keeps orthonormal columns even when the
// input is rank-deficient.
void orthonormalize_u(Matrix& u, const std::vector<double>& s) {
  const std::size_t rows = u.rows();
  const std::size_t cols = u.cols();
  const double largest = s.empty() ? 0.0 : s.front();
  const double tiny = std::max(largest, 1.0) * 1e-290;
  for (std::size_t c = 0; c < cols; ++c) {
    double* column = u.col(c);
    if (s[c] > tiny) {
      for (std::size_t r = 0; r < rows; ++r) column[r] /= s[c];
      continue;
    }
    // Deterministic completion: orthogonalize the best coordinate axis
    // against the columns already in place.
    double best_norm = -1.0;
    std::vector<double> best;
    std::vector<double> candidate(rows);
    for (std::size_t axis = 0; axis < rows; ++axis) {
      std::fill(candidate.begin(), candidate.end(), 0.0);
      candidate[axis] = 1.0;
      for (std::size_t prev = 0; prev < c; ++prev) {
        const double* pcol = u.col(prev);
        double dot = pcol[axis];
        for (std::size_t r = 0; r < rows; ++r) candidate[r] -= dot * pcol[r];
      }
      double norm_sq = 0.0;
      for (double value : candidate) norm_sq += value * value;
      if (norm_sq > best_norm) {
        best_norm = norm_sq;
        best = candidate;
        if (best_norm > 0.5) break;  // already comfortably independent
      }
    }
    const double norm = std::sqrt(best_norm);
    for (std::size_t r = 0; r < rows; ++r) column[r] = best[r] / norm;
    // One re-orthogonalization pass for numerical hygiene.
    for (std::size_t prev = 0; prev < c; ++prev) {
      const double* pcol = u.col(prev);
      double dot = 0.0;
      for (std::size_t r = 0; r < rows; ++r) dot += pcol[r] * column[r];
      for (std::size_t r = 0; r < rows; ++r) column[r] -= dot * pcol[r];
    }
    double norm_sq = 0.0;
    for (std::size_t r = 0; r < rows; ++r) norm_sq += column[r] * column[r];
    const double renorm = std::sqrt(norm_sq);
    for (std::size_t r = 0; r < rows; ++r) column[r] /= renorm;
  }
}

void apply_sign_convention(Matrix& u, Matrix& v) {
  for (std::size_t c = 0; c < u.cols(); ++c) {
    double* column = u.col(c);
    std::size_t pivot = 0;
    for (std::size_t r = 1; r < u.rows(); ++r)
      if (std::abs(column[r]) > std::abs(column[pivot])) pivot = r;
    if (column[pivot] < 0.0) {
      for (std::size_t r = 0; r < u.rows(); ++r) column[r] = -column[r];
      double* vcol = v.col(c);
      for (std::size_t r = 0; r < v.rows(); ++r) vcol[r] = -vcol[r];
    }
  }
}

SvdResult svd_tall(const Matrix& m) {
  JacobiResult jacobi = one_sided_jacobi(m);

  const std::size_t cols = m.cols();
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return jacobi.s[a] > jacobi.s[b];
  });

  SvdResult result;
  result.u = Matrix(m.rows(), cols);
  result.v = Matrix(cols, cols);
  result.singular_values.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    result.singular_values[c] = jacobi.s[order[c]];
    const double* ucol = jacobi.u.col(order[c]);
    for (std::size_t r = 0; r < m.rows(); ++r) result.u(r, c) = ucol[r];
    const double* vcol = jacobi.v.col(order[c]);
    for (std::size_t r = 0; r < cols; ++r) result.v(r, c) = vcol[r];
  }
  orthonormalize_u(result.u, result.singular_values);
  return result;
}

}  // namespace

FeatureMatrix make_feature_matrix(const std::vector<spectrum::FeatureVector>& features) {
  if (features.empty())
    throw std::runtime_error("make_feature_matrix: no features");
  const std::size_t t = features.front().amplitudes.size();
  FeatureMatrix fm;
  fm.entities.reserve(features.size());
  fm.data = Matrix(t, features.size());
  for (std::size_t c = 0; c < features.size(); ++c) {
    const spectrum::FeatureVector& feature = features[c];
    if (feature.amplitudes.size() != t)
      throw std::runtime_error("make_feature_matrix: inconsistent feature length for '" +
                               feature.entity + "'");
    for (const std::string& seen : fm.entities)
      if (seen == feature.entity)
        throw std::runtime_error("make_feature_matrix: duplicate entity '" +
                                 feature.entity + "'");
    double norm_sq = 0.0;
    for (double amplitude : feature.amplitudes) norm_sq += amplitude * amplitude;
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9)
      throw std::runtime_error("make_feature_matrix: column for '" + feature.entity +
                               "' is not unit-norm");
    fm.entities.push_back(feature.entity);
    for (std::size_t r = 0; r < t; ++r) fm.data(r, c) = feature.amplitudes[r];
  }
  return fm;
}

SvdResult svd(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw std::runtime_error("svd: empty matrix");
  for (double value : m.data())
    if (!std::isfinite(value)) throw std::runtime_error("svd: non-finite input");

  if (m.rows() >= m.cols()) {
    SvdResult result = svd_tall(m);
    apply_sign_convention(result.u, result.v);
    return result;
  }
  // Wide matrix: decompose the transpose and swap factors.
  SvdResult t = svd_tall(m.transposed());
  SvdResult result;
  result.u = std::move(t.v);
  result.v = std::move(t.u);
  result.singular_values = std::move(t.singular_values);
  apply_sign_convention(result.u, result.v);
  return result;
}

double energy_fraction(std::span<const double> singular_values, std::size_t k) {
  if (k > singular_values.size())
    throw std::runtime_error("energy_fraction: k exceeds spectrum length");
  double total = 0.0;
  double head = 0.0;
  for (std::size_t i = 0; i < singular_values.size(); ++i) {
    const double sq = singular_values[i] * singular_values[i];
    total += sq;
    if (i < k) head += sq;
  }
  if (total <= 0.0)
    throw std::runtime_error("energy_fraction: all-zero singular values");
  return head / total;
}

std::size_t choose_k(std::span<const double> singular_values, double target) {
  if (!(target > 0.0) || target > 1.0)
    throw std::runtime_error("choose_k: target must be in (0, 1]");
  std::size_t positive = 0;
  for (double value : singular_values)
    if (value > 0.0) ++positive;
  if (positive == 0) return 0;
  for (std::size_t k = 1; k < positive; ++k)
    if (energy_fraction(singular_values, k) >= target) return k;
  return positive;
}

Basis make_basis(const SvdResult& svd_result, std::size_t k) {
  std::size_t positive = 0;
  for (double value : svd_result.singular_values)
    if (value > 0.0) ++positive;
  if (k == 0 || k > positive)
    throw std::runtime_error("make_basis: k = " + std::to_string(k) +
                             " outside [1, " + std::to_string(positive) +
                             "] (positive singular values)");
  Basis basis;
  basis.vectors = Matrix(svd_result.u.rows(), k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < svd_result.u.rows(); ++r)
      basis.vectors(r, c) = svd_result.u(r, c);
  basis.singular_values = svd_result.singular_values;
  return basis;
}

std::vector<ReducedFeature> project(const FeatureMatrix& features, const Basis& basis) {
  if (features.data.rows() != basis.vectors.rows())
    throw std::runtime_error("project: feature length " +
                             std::to_string(features.data.rows()) +
                             " does not match basis length " +
                             std::to_string(basis.vectors.rows()));
  const std::size_t k = basis.vectors.cols();
  const std::size_t t = basis.vectors.rows();
  std::vector<ReducedFeature> reduced;
  reduced.reserve(features.entities.size());
  for (std::size_t c = 0; c < features.entities.size(); ++c) {
    ReducedFeature feature;
    feature.entity = features.entities[c];
    feature.coords.resize(k);
    const double* column = features.data.col(c);
    for (std::size_t j = 0; j < k; ++j) {
      const double* ucol = basis.vectors.col(j);
      double dot = 0.0;
      for (std::size_t r = 0; r < t; ++r) dot += ucol[r] * column[r];
      feature.coords[j] = dot;
    }
    reduced.push_back(std::move(feature));
  }
  return reduced;
}

std::string write_basis_csv(const Basis& basis) {
  const std::size_t k = basis.vectors.cols();
  const std::size_t t = basis.vectors.rows();
  std::string out = std::to_string(k) + "," + std::to_string(t) + "\n";
  for (std::size_t c = 0; c < k; ++c) {
    const double* column = basis.vectors.col(c);
    for (std::size_t r = 0; r < t; ++r) {
      if (r > 0) out += ',';
      out += csv::format_double(column[r]);
    }
    out += '\n';
  }
  return out;
}

Basis read_basis_csv(std::string_view text) {
  auto all_lines = csv::lines(text);
  std::vector<std::string_view> rows;
  for (std::string_view line : all_lines)
    if (!line.empty()) rows.push_back(line);
  if (rows.empty()) throw std::runtime_error("read_basis_csv: empty file");

  auto header = csv::split(rows[0]);
  if (header.size() != 2)
    throw std::runtime_error("read_basis_csv: header must be 'k,T'");
  const std::uint64_t k = csv::parse_uint64(header[0], "read_basis_csv");
  const std::uint64_t t = csv::parse_uint64(header[1], "read_basis_csv");
  if (k == 0 || t == 0)
    throw std::runtime_error("read_basis_csv: k and T must be positive");
  if (rows.size() - 1 != k)
    throw std::runtime_error("read_basis_csv: expected " + std::to_string(k) +
                             " vector rows, found " + std::to_string(rows.size() - 1));

  Basis basis;
  basis.vectors = Matrix(t, k);
  for (std::size_t c = 0; c < k; ++c) {
    auto fields = csv::split(rows[c + 1]);
    if (fields.size() != t)
      throw std::runtime_error("read_basis_csv: row " + std::to_string(c + 1) +
                               " has " + std::to_string(fields.size()) +
                               " values, expected " + std::to_string(t));
    for (std::size_t r = 0; r < t; ++r)
      basis.vectors(r, c) = csv::parse_double(fields[r], "read_basis_csv");
  }
  // Orthonormality is a type invariant; verify what was loaded.
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      double dot = 0.0;
      for (std::size_t r = 0; r < t; ++r) dot += basis.vectors(r, a) * basis.vectors(r, b);
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(dot - expected) > 1e-8)
        throw std::runtime_error("read_basis_csv: vectors are not orthonormal");
    }
  }
  return basis;
}

std::string write_singular_values_csv(std::span<const double> singular_values) {
  std::string out;
  for (std::size_t i = 0; i < singular_values.size(); ++i) {
    if (i > 0) out += ',';
    out += csv::format_double(singular_values[i]);
  }
  out += '\n';
  return out;
}

std::vector<double> read_singular_values_csv(std::string_view text) {
  auto all_lines = csv::lines(text);
  std::vector<std::string_view> rows;
  for (std::string_view line : all_lines)
    if (!line.empty()) rows.push_back(line);
  if (rows.size() != 1)
    throw std::runtime_error("read_singular_values_csv: expected a single row");
  std::vector<double> values;
  for (std::string_view field : csv::split(rows[0])) {
    double value = csv::parse_double(field, "read_singular_values_csv");
    if (value < 0.0)
      throw std::runtime_error("read_singular_values_csv: negative singular value");
    if (!values.empty() && value > values.back() + 1e-12)
      throw std::runtime_error("read_singular_values_csv: values not descending");
    values.push_back(value);
  }
  return values;
}

std::string write_reduced_csv(const std::vector<ReducedFeature>& features) {
  std::string out;
  for (const ReducedFeature& feature : features) {
    out += feature.entity;
    for (double coord : feature.coords) {
      out += ',';
      out += csv::format_double(coord);
    }
    out += '\n';
  }
  return out;
}

std::vector<ReducedFeature> read_reduced_csv(std::string_view text) {
  std::vector<ReducedFeature> features;
  std::size_t line_number = 0;
  std::size_t width = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() < 2)
      throw std::runtime_error("read_reduced_csv: line " + std::to_string(line_number) +
                               ": expected 'entity,c0,...'");
    ReducedFeature feature;
    feature.entity = std::string(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i)
      feature.coords.push_back(csv::parse_double(fields[i], "read_reduced_csv"));
    if (width == 0)
      width = feature.coords.size();
    else if (feature.coords.size() != width)
      throw std::runtime_error("read_reduced_csv: line " + std::to_string(line_number) +
                               ": inconsistent row length");
    features.push_back(std::move(feature));
  }
  if (features.empty()) throw std::runtime_error("read_reduced_csv: empty file");
  return features;
}

}  // namespace netfp::reduction
