#include "gffexc/minkowski.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gffexc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared distance transform of a sampled function along one line.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& hull,
            std::vector<double>& bound) {
  const int n = static_cast<int>(f.size());
  hull.assign(static_cast<std::size_t>(n), 0);
  bound.assign(static_cast<std::size_t>(n) + 1, 0.0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = 0.0;
    while (k >= 0) {
      const int p = hull[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s > bound[k]) break;
      --k;
    }
    ++k;
    hull[k] = q;
    bound[k] = k == 0 ? -kInf : s;
    bound[k + 1] = kInf;
  }
  if (k < 0) {
    d.assign(static_cast<std::size_t>(n), kInf);
    return;
  }
  d.resize(static_cast<std::size_t>(n));
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (bound[j + 1] < q) ++j;
    const double diff = q - hull[j];
    d[q] = diff * diff + f[hull[j]];
  }
}

}  // namespace

DistanceGrid distance_transform(const ExcursionCluster& cluster, const LatticeDomain& domain) {
  if (cluster.vertices.empty()) throw std::invalid_argument("empty cluster");
  const int width = domain.grid_width();
  const int height = domain.grid_height();
  std::vector<double> grid(static_cast<std::size_t>(width) * height, kInf);
  auto at = [&](int a, int b) -> double& { return grid[static_cast<std::size_t>(a) * height + b]; };
  for (VertexId v : cluster.vertices) {
    const LatticePoint p = domain.interior_point(v);
    at(p.i - domain.i_min(), p.j - domain.j_min()) = 0.0;
  }

  std::vector<double> line;
  std::vector<double> out;
  std::vector<int> hull;
  std::vector<double> bound;
  for (int a = 0; a < width; ++a) {
    line.assign(height, 0.0);
    for (int b = 0; b < height; ++b) line[b] = at(a, b);
    edt_1d(line, out, hull, bound);
    for (int b = 0; b < height; ++b) at(a, b) = out[b];
  }
  for (int b = 0; b < height; ++b) {
    line.assign(width, 0.0);
    for (int a = 0; a < width; ++a) line[a] = at(a, b);
    edt_1d(line, out, hull, bound);
    for (int a = 0; a < width; ++a) at(a, b) = out[a];
  }

  DistanceGrid result;
  result.mesh = domain.mesh();
  const auto points = domain.interior_points();
  result.distance.resize(points.size());
  result.distance_sq_lattice.resize(points.size());
  for (std::size_t v = 0; v < points.size(); ++v) {
    const double d2 = at(points[v].i - domain.i_min(), points[v].j - domain.j_min());
    result.distance_sq_lattice[v] = static_cast<std::int64_t>(std::llround(d2));
    result.distance[v] = std::sqrt(d2) * domain.mesh();
  }
  return result;
}

std::size_t neighbourhood_count(const DistanceGrid& grid, double r) {
  std::size_t count = 0;
  for (double d : grid.distance) {
    if (d <= r) ++count;
  }
  return count;
}

double minkowski_measure(const DistanceGrid& grid, double r, std::span<const double> f) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("gauge undefined");
  if (f.size() != grid.distance.size()) throw std::invalid_argument("grid function size mismatch");
  double sum = 0.0;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (grid.distance[v] <= r) sum += f[v];
  }
  return 0.5 * std::sqrt(std::abs(std::log(r))) * grid.mesh * grid.mesh * sum;
}

double minkowski_measure(const ExcursionCluster& cluster, const LatticeDomain& domain, double r,
                         std::span<const double> f) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("gauge undefined");
  return minkowski_measure(distance_transform(cluster, domain), r, f);
}

std::vector<GaugeRatio> gauge_ratio(const ExcursionCluster& cluster, const Field& field,
                                    std::span<const double> radii, std::span<const double> f) {
  const double mass = evaluate_measure(cluster, field, f);
  if (!(mass > 0.0)) throw std::invalid_argument("zero field mass");
  const DistanceGrid grid = distance_transform(cluster, field.domain());
  const double h = field.domain().mesh();
  std::vector<GaugeRatio> out;
  out.reserve(radii.size());
  for (double r : radii) {
    GaugeRatio row;
    row.r = r;
    row.minkowski = minkowski_measure(grid, r, f);
    row.field_mass = mass;
    row.ratio = row.minkowski / mass;
    row.sub_resolution = r < 2.0 * h * (1.0 - 1e-12) || r > cluster.diameter / 4.0;
    out.push_back(row);
  }
  return out;
}

}  // namespace gffexc
