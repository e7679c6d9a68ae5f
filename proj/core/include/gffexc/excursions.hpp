#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "gffexc/lattice.hpp"
#include "gffexc/metric.hpp"

namespace gffexc {

enum class DecompositionMode { metric, discrete };

/// One sign cluster of a field together with its excursion measure.
struct ExcursionCluster {
  std::vector<VertexId> vertices;  // ascending
  int sign = 1;
  double mass = 0.0;               // h^2 * sum |phi_v|
  double diameter = 0.0;           // continuum Euclidean diameter
  std::int64_t diameter_sq_lattice = 0;  // exact squared diameter in lattice units
  VertexId id = 0;                 // smallest member, i.e. lexicographically smallest point
};

/// Clusters ordered by nonincreasing diameter, ties by id. Clusters are
/// disjoint and cover exactly the vertices where the field is nonzero.
struct Decomposition {
  DecompositionMode mode = DecompositionMode::metric;
  std::shared_ptr<const LatticeDomain> domain;
  std::vector<ExcursionCluster> clusters;
  std::vector<std::int32_t> cluster_of;  // rank index per vertex, -1 where phi_v == 0

  std::size_t size() const { return clusters.size(); }
};

/// Components of the open-edge graph. Throws std::invalid_argument
/// ("invalid edge state") if an open edge joins vertices of different or zero
/// sign, or touches the boundary.
Decomposition decompose(const Field& field, std::span<const EdgeState> openings);

/// Nearest-neighbour components of equal-sign vertices (no metric thinning).
Decomposition decompose_discrete(const Field& field);

/// (nu_k, f) = h^2 * sum_{v in C} f(v) |phi_v|.
double evaluate_measure(const ExcursionCluster& cluster, const Field& field, std::span<const double> f);

/// sum_k sigma_k nu_k as a vertex field; equals `field` exactly.
Field reconstruct(const Decomposition& decomposition, const Field& field);

/// Sum over the first `count` clusters (clamped to the cluster count).
Field partial_sum(const Decomposition& decomposition, const Field& field, std::size_t count);

struct PathHits {
  std::vector<std::size_t> clusters;  // ranks of clusters containing a path vertex, ascending
  std::vector<VertexId> vertices;     // union of those clusters and the path, ascending
};

/// Clusters met by a lattice path that starts next to the boundary. Throws
/// std::invalid_argument for empty or disconnected paths.
PathHits clusters_hitting_path(const Decomposition& decomposition, std::span<const VertexId> path);

/// Exact squared diameter of a lattice point set: brute force for small sets,
/// convex hull plus rotating calipers otherwise.
std::int64_t lattice_diameter_squared(std::span<const LatticePoint> points);

/// Raster dump of cluster ranks (1-based, 0 = no cluster). Format:
///   P2
///   <width> <height>
///   <maxlabel>
/// followed by `height` rows of `width` labels, top row = largest j.
void write_cluster_raster(std::ostream& out, const Decomposition& decomposition);

}  // namespace gffexc
