#include "netfp/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netfp/csv.hpp"

namespace netfp::similarity {

double distance(const reduction::ReducedFeature& a, const reduction::ReducedFeature& b) {
  if (a.coords.size() != b.coords.size())
    throw std::runtime_error("distance: dimension mismatch between '" + a.entity +
                             "' (" + std::to_string(a.coords.size()) + ") and '" +
                             b.entity + "' (" + std::to_string(b.coords.size()) + ")");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double diff = a.coords[i] - b.coords[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

SimilarityMatrix pdist(const std::vector<reduction::ReducedFeature>& features) {
  if (features.empty()) throw std::runtime_error("pdist: no features");
  SimilarityMatrix s;
  s.entities.reserve(features.size());
  for (const reduction::ReducedFeature& feature : features)
    s.entities.push_back(feature.entity);
  s.values = Matrix(features.size(), features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t j = i + 1; j < features.size(); ++j) {
      const double d = distance(features[i], features[j]);
      s.values(i, j) = d;
      s.values(j, i) = d;
    }
  }
  return s;
}

namespace {

std::size_t entity_index(const SimilarityMatrix& s, const std::string& entity,
                         std::string_view context) {
  for (std::size_t i = 0; i < s.entities.size(); ++i)
    if (s.entities[i] == entity) return i;
  throw std::runtime_error(std::string(context) + ": unknown entity '" + entity + "'");
}

}  // namespace

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const SimilarityMatrix& s, const std::string& entity, std::size_t n) {
  const std::size_t self = entity_index(s, entity, "nearest_neighbors");
  if (n >= s.entities.size())
    throw std::runtime_error("nearest_neighbors: n must be below the entity count");

  std::vector<std::size_t> order;
  order.reserve(s.entities.size() - 1);
  for (std::size_t i = 0; i < s.entities.size(); ++i)
    if (i != self) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = s.values(self, a);
    const double db = s.values(self, b);
    if (da != db) return da < db;
    return s.entities[a] < s.entities[b];
  });

  std::vector<std::pair<std::string, double>> result;
  result.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    result.emplace_back(s.entities[order[i]], s.values(self, order[i]));
  return result;
}

std::vector<std::vector<std::string>> cluster(const SimilarityMatrix& s, double cutoff) {
  if (cutoff < 0.0) throw std::runtime_error("cluster: cutoff must be non-negative");
  const std::size_t w = s.entities.size();

  // Union-find over the <=cutoff graph; single linkage merges exactly the
  // connected components.
  std::vector<std::size_t> parent(w);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = i + 1; j < w; ++j)
      if (s.values(i, j) <= cutoff) parent[find(i)] = find(j);

  std::vector<std::vector<std::string>> groups;
  std::vector<long> group_of(w, -1);
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t root = find(i);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of[root])].push_back(s.entities[i]);
  }
  for (std::vector<std::string>& group : groups) std::sort(group.begin(), group.end());
  std::sort(groups.begin(), groups.end(),
            [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
              return a.front() < b.front();
            });
  return groups;
}

ScatterMap scatter_coords(const reduction::FeatureMatrix& features,
                          const reduction::Basis& basis,
                          const std::map<std::string, std::string>& regions) {
  if (basis.vectors.cols() < 2)
    throw std::runtime_error("scatter_coords: basis must retain at least 2 components");
  std::vector<reduction::ReducedFeature> reduced = reduction::project(features, basis);
  ScatterMap scatter;
  scatter.reserve(reduced.size());
  for (const reduction::ReducedFeature& feature : reduced) {
    ScatterPoint point;
    point.entity = feature.entity;
    point.pc1 = feature.coords[0];
    point.pc2 = feature.coords[1];
    if (auto it = regions.find(feature.entity); it != regions.end())
      point.region = it->second;
    scatter.push_back(std::move(point));
  }
  return scatter;
}

std::string write_similarity_csv(const SimilarityMatrix& s) {
  std::string out;
  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    if (i > 0) out += ',';
    out += s.entities[i];
  }
  out += '\n';
  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    out += s.entities[i];
    for (std::size_t j = 0; j < s.entities.size(); ++j) {
      out += ',';
      out += csv::format_double(s.values(i, j));
    }
    out += '\n';
  }
  return out;
}

SimilarityMatrix read_similarity_csv(std::string_view text) {
  auto all_lines = csv::lines(text);
  std::vector<std::string_view> rows;
  for (std::string_view line : all_lines)
    if (!line.empty()) rows.push_back(line);
  if (rows.size() < 2)
    throw std::runtime_error("read_similarity_csv: missing header or rows");

  SimilarityMatrix s;
  for (std::string_view code : csv::split(rows[0])) {
    if (code.empty())
      throw std::runtime_error("read_similarity_csv: empty entity code in header");
    s.entities.emplace_back(code);
  }
  const std::size_t w = s.entities.size();
  if (rows.size() - 1 != w)
    throw std::runtime_error("read_similarity_csv: expected " + std::to_string(w) +
                             " rows after header, found " + std::to_string(rows.size() - 1));
  s.values = Matrix(w, w);
  for (std::size_t i = 0; i < w; ++i) {
    auto fields = csv::split(rows[i + 1]);
    if (fields.size() != w + 1)
      throw std::runtime_error("read_similarity_csv: row " + std::to_string(i + 1) +
                               " has " + std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(w + 1));
    if (fields[0] != s.entities[i])
      throw std::runtime_error("read_similarity_csv: row order mismatch at '" +
                               std::string(fields[0]) + "'");
    for (std::size_t j = 0; j < w; ++j) {
      const double value = csv::parse_double(fields[j + 1], "read_similarity_csv");
      if (value < 0.0)
        throw std::runtime_error("read_similarity_csv: negative distance");
      s.values(i, j) = value;
    }
  }
  for (std::size_t i = 0; i < w; ++i) {
    if (s.values(i, i) != 0.0)
      throw std::runtime_error("read_similarity_csv: nonzero diagonal at '" +
                               s.entities[i] + "'");
    for (std::size_t j = i + 1; j < w; ++j)
      if (std::abs(s.values(i, j) - s.values(j, i)) > 1e-9)
        throw std::runtime_error("read_similarity_csv: asymmetry between '" +
                                 s.entities[i] + "' and '" + s.entities[j] + "'");
  }
  return s;
}

std::string write_scatter_csv(const ScatterMap& scatter) {
  std::string out;
  for (const ScatterPoint& point : scatter) {
    out += point.entity;
    out += ',';
    out += csv::format_double(point.pc1);
    out += ',';
    out += csv::format_double(point.pc2);
    out += ',';
    out += point.region;
    out += '\n';
  }
  return out;
}

}  // namespace netfp::similarity
