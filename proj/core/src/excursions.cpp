#include "gffexc/excursions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "gffexc/union_find.hpp"

namespace gffexc {
namespace {

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

std::int64_t dist_sq(LatticePoint a, LatticePoint b) {
  const std::int64_t dx = a.i - b.i;
  const std::int64_t dy = a.j - b.j;
  return dx * dx + dy * dy;
}

std::int64_t cross(LatticePoint o, LatticePoint a, LatticePoint b) {
  return static_cast<std::int64_t>(a.i - o.i) * (b.j - o.j) -
         static_cast<std::int64_t>(a.j - o.j) * (b.i - o.i);
}

std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<LatticePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Decomposition assemble(const Field& field, DisjointSets& sets, DecompositionMode mode) {
  const LatticeDomain& domain = field.domain();
  const std::size_t n = field.size();
  const double area = domain.mesh() * domain.mesh();

  Decomposition out;
  out.mode = mode;
  out.domain = field.domain_ptr();

  std::vector<std::int32_t> root_slot(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    if (field[v] == 0.0) continue;
    const std::uint32_t root = sets.find(v);
    if (root_slot[root] < 0) {
      root_slot[root] = static_cast<std::int32_t>(out.clusters.size());
      ExcursionCluster cluster;
      cluster.sign = sign_of(field[v]);
      cluster.id = v;  // first visit in index order is the lexicographic minimum
      out.clusters.push_back(std::move(cluster));
    }
    ExcursionCluster& cluster = out.clusters[static_cast<std::size_t>(root_slot[root])];
    cluster.vertices.push_back(v);
    cluster.mass += std::abs(field[v]);
  }

  std::vector<LatticePoint> scratch;
  for (auto& cluster : out.clusters) {
    cluster.mass *= area;
    scratch.clear();
    for (VertexId v : cluster.vertices) scratch.push_back(domain.interior_point(v));
    cluster.diameter_sq_lattice = lattice_diameter_squared(scratch);
    cluster.diameter = std::sqrt(static_cast<double>(cluster.diameter_sq_lattice)) * domain.mesh();
  }

  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const ExcursionCluster& a, const ExcursionCluster& b) {
              if (a.diameter_sq_lattice != b.diameter_sq_lattice) {
                return a.diameter_sq_lattice > b.diameter_sq_lattice;
              }
              return a.id < b.id;
            });

  out.cluster_of.assign(n, -1);
  for (std::size_t k = 0; k < out.clusters.size(); ++k) {
    for (VertexId v : out.clusters[k].vertices) out.cluster_of[v] = static_cast<std::int32_t>(k);
  }
  return out;
}

}  // namespace

std::int64_t lattice_diameter_squared(std::span<const LatticePoint> points) {
  if (points.size() < 2) return 0;
  std::int64_t best = 0;
  if (points.size() <= 16) {
    for (std::size_t a = 0; a < points.size(); ++a) {
      for (std::size_t b = a + 1; b < points.size(); ++b) best = std::max(best, dist_sq(points[a], points[b]));
    }
    return best;
  }
  const auto hull = convex_hull({points.begin(), points.end()});
  const std::size_t m = hull.size();
  if (m == 1) return 0;
  if (m == 2) return dist_sq(hull[0], hull[1]);
  std::size_t k = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t next = (i + 1) % m;
    while (std::abs(cross(hull[i], hull[next], hull[(k + 1) % m])) >
           std::abs(cross(hull[i], hull[next], hull[k]))) {
      k = (k + 1) % m;
    }
    best = std::max({best, dist_sq(hull[i], hull[k]), dist_sq(hull[next], hull[k])});
  }
  return best;
}

Decomposition decompose(const Field& field, std::span<const EdgeState> openings) {
  const auto edges = field.domain().edges();
  DisjointSets sets(field.size());
  for (const EdgeState& state : openings) {
    if (state.edge >= edges.size()) throw std::invalid_argument("invalid edge state");
    if (!state.omega) continue;
    const Edge& edge = edges[state.edge];
    if (edge.to_boundary || !(field[edge.from] * field[edge.to] > 0.0)) {
      throw std::invalid_argument("invalid edge state");
    }
    sets.unite(edge.from, edge.to);
  }
  return assemble(field, sets, DecompositionMode::metric);
}

Decomposition decompose_discrete(const Field& field) {
  DisjointSets sets(field.size());
  for (const Edge& edge : field.domain().edges()) {
    if (!edge.to_boundary && field[edge.from] * field[edge.to] > 0.0) sets.unite(edge.from, edge.to);
  }
  return assemble(field, sets, DecompositionMode::discrete);
}

double evaluate_measure(const ExcursionCluster& cluster, const Field& field, std::span<const double> f) {
  if (f.size() != field.size()) throw std::invalid_argument("grid function size mismatch");
  double sum = 0.0;
  for (VertexId v : cluster.vertices) sum += f[v] * std::abs(field[v]);
  const double h = field.domain().mesh();
  return h * h * sum;
}

Field reconstruct(const Decomposition& decomposition, const Field& field) {
  return partial_sum(decomposition, field, decomposition.size());
}

Field partial_sum(const Decomposition& decomposition, const Field& field, std::size_t count) {
  count = std::min(count, decomposition.size());
  std::vector<double> out(field.size(), 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& cluster = decomposition.clusters[k];
    for (VertexId v : cluster.vertices) out[v] = cluster.sign * std::abs(field[v]);
  }
  return Field(field.domain_ptr(), std::move(out));
}

PathHits clusters_hitting_path(const Decomposition& decomposition, std::span<const VertexId> path) {
  const LatticeDomain& domain = *decomposition.domain;
  if (path.empty()) throw std::invalid_argument("disconnected path");
  for (VertexId v : path) {
    if (v >= domain.interior_count()) throw std::out_of_range("path vertex is not interior");
  }
  if (!domain.touches_boundary(path.front())) {
    throw std::invalid_argument("path must start next to the boundary");
  }
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto& nbs = domain.neighbors(path[k - 1]);
    const bool adjacent = std::any_of(nbs.begin(), nbs.end(), [&](const Neighbor& nb) {
      return !nb.boundary && nb.index == path[k];
    });
    if (!adjacent) throw std::invalid_argument("disconnected path");
  }

  PathHits hits;
  for (VertexId v : path) {
    const std::int32_t c = decomposition.cluster_of[v];
    if (c >= 0) hits.clusters.push_back(static_cast<std::size_t>(c));
  }
  std::sort(hits.clusters.begin(), hits.clusters.end());
  hits.clusters.erase(std::unique(hits.clusters.begin(), hits.clusters.end()), hits.clusters.end());

  hits.vertices.assign(path.begin(), path.end());
  for (std::size_t c : hits.clusters) {
    const auto& members = decomposition.clusters[c].vertices;
    hits.vertices.insert(hits.vertices.end(), members.begin(), members.end());
  }
  std::sort(hits.vertices.begin(), hits.vertices.end());
  hits.vertices.erase(std::unique(hits.vertices.begin(), hits.vertices.end()), hits.vertices.end());
  return hits;
}

void write_cluster_raster(std::ostream& out, const Decomposition& decomposition) {
  const LatticeDomain& domain = *decomposition.domain;
  const std::int32_t width = domain.grid_width();
  const std::int32_t height = domain.grid_height();
  out << "P2\n" << width << ' ' << height << '\n' << decomposition.size() << '\n';
  for (std::int32_t row = 0; row < height; ++row) {
    const std::int32_t j = domain.j_max() - row;
    for (std::int32_t col = 0; col < width; ++col) {
      const auto v = domain.interior_index({domain.i_min() + col, j});
      const std::int64_t label = v ? decomposition.cluster_of[*v] + 1 : 0;
      if (col) out << ' ';
      out << label;
    }
    out << '\n';
  }
}

}  // namespace gffexc
