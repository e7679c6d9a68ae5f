#pragma once

#include <span>
#include <vector>

#include "gffexc/excursions.hpp"

namespace gffexc {

/// Continuum Euclidean distance from every interior vertex to a cluster.
struct DistanceGrid {
  double mesh = 1.0;
  std::vector<double> distance;              // continuum units, per interior vertex
  std::vector<std::int64_t> distance_sq_lattice;  // exact, lattice units
};

/// Exact Euclidean distance transform (separable lower-envelope algorithm of
/// Felzenszwalb and Huttenlocher) over the domain's bounding grid. Throws
/// std::invalid_argument for an empty cluster.
DistanceGrid distance_transform(const ExcursionCluster& cluster, const LatticeDomain& domain);

/// Number of interior vertices within continuum distance r of the cluster.
std::size_t neighbourhood_count(const DistanceGrid& grid, double r);

/// 1/2 |log r|^{1/2} h^2 sum_{v : d(v) <= r} f(v). Throws std::domain_error
/// ("gauge undefined") unless 0 < r < 1.
double minkowski_measure(const DistanceGrid& grid, double r, std::span<const double> f);
double minkowski_measure(const ExcursionCluster& cluster, const LatticeDomain& domain, double r,
                         std::span<const double> f);

struct GaugeRatio {
  double r = 0.0;
  double minkowski = 0.0;
  double field_mass = 0.0;
  double ratio = 0.0;
  /// r outside the admissible window [2h, diameter/4].
  bool sub_resolution = false;
};

/// Minkowski-gauge measure over the field-carried excursion measure, per r.
/// Throws std::invalid_argument if (nu, f) is not positive.
std::vector<GaugeRatio> gauge_ratio(const ExcursionCluster& cluster, const Field& field,
                                    std::span<const double> radii, std::span<const double> f);

}  // namespace gffexc
