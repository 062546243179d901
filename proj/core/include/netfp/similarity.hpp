// Pairwise distances between reduced features, neighbor queries, cutoff
// grouping, and 2-component scatter export.
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netfp/matrix.hpp"
#include "netfp/reduction.hpp"

namespace netfp::similarity {

// Symmetric zero-diagonal matrix of Euclidean distances.
struct SimilarityMatrix {
  std::vector<std::string> entities;
  Matrix values;  // w x w
};

struct ScatterPoint {
  std::string entity;
  double pc1 = 0.0;
  double pc2 = 0.0;
  std::string region;  // optional metadata, may be empty
};

using ScatterMap = std::vector<ScatterPoint>;

double distance(const reduction::ReducedFeature& a, const reduction::ReducedFeature& b);

SimilarityMatrix pdist(const std::vector<reduction::ReducedFeature>& features);

// The n closest entities to `entity`, ascending by distance, self excluded,
// ties broken by entity code. Requires n < number of entities.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const SimilarityMatrix& s, const std::string& entity, std::size_t n);

// Single-linkage grouping cut at `cutoff`: connected components of the
// graph with an edge wherever distance <= cutoff. Groups are ordered by
// their smallest member code; members are sorted.
std::vector<std::vector<std::string>> cluster(const SimilarityMatrix& s, double cutoff);

// Per entity, the first two projection coordinates. Requires basis k >= 2.
// Region labels are optional caller-supplied metadata keyed by entity.
ScatterMap scatter_coords(const reduction::FeatureMatrix& features,
                          const reduction::Basis& basis,
                          const std::map<std::string, std::string>& regions = {});

// Matrix persistence: header row of entity codes, then one row per entity:
// `entity,v1,...,vw`.
std::string write_similarity_csv(const SimilarityMatrix& s);
SimilarityMatrix read_similarity_csv(std::string_view text);

// Scatter export: `entity,pc1,pc2,region` rows.
std::string write_scatter_csv(const ScatterMap& scatter);

}  // namespace netfp::similarity
