#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gffexc {

using Rng = std::mt19937_64;
using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Integer lattice coordinate; vertex (i, j) sits at continuum point (i*h, j*h).
struct LatticePoint {
  std::int32_t i = 0;
  std::int32_t j = 0;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct Rectangle {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Closed rectilinear polygon given by its corners in order (no repeated
/// closing vertex). Consecutive corners must share an x or a y coordinate.
struct RectilinearPolygon {
  std::vector<Point> corners;
};

/// Planar shape from which a lattice domain is cut.
///
/// Text grammar (also used in configuration files):
///   square(side=2.0, center=0,0)
///   rect(x0=-1, y0=-1, x1=1, y1=1)
///   polygon(0:0, 2:0, 2:1, 1:1, 1:2, 0:2)
class DomainSpec {
 public:
  DomainSpec() = default;
  explicit DomainSpec(Rectangle rect);
  explicit DomainSpec(RectilinearPolygon polygon);

  static DomainSpec square(double side, Point center);
  static DomainSpec parse(std::string_view text);

  bool contains_strictly(Point p) const;
  Rectangle bounding_box() const;
  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
  std::string to_string() const;

 private:
  std::variant<Rectangle, RectilinearPolygon> shape_{Rectangle{-1.0, -1.0, 1.0, 1.0}};
};

/// One lattice edge. `to` is an interior vertex index unless `to_boundary`,
/// in which case it indexes boundary_points().
struct Edge {
  VertexId from = 0;
  std::uint32_t to = 0;
  bool to_boundary = false;
};

/// Neighbour slot of an interior vertex, in direction order +x, -x, +y, -y.
struct Neighbor {
  std::uint32_t index = 0;
  bool boundary = false;
  EdgeId edge = 0;
};

/// Mesh-h grid graph approximating a planar domain.
///
/// Interior vertices are the lattice points strictly inside the shape, indexed
/// in lexicographic (i, j) order, so a smaller index means a lexicographically
/// smaller coordinate. Boundary vertices are lattice points adjacent to the
/// interior that are not inside. Every interior vertex has exactly four
/// incident edges.
class LatticeDomain {
 public:
  static std::shared_ptr<const LatticeDomain> build(const DomainSpec& shape, int level);

  int level() const { return level_; }
  double mesh() const { return mesh_; }
  const DomainSpec& shape() const { return shape_; }
  Rectangle bounding_box() const { return shape_.bounding_box(); }

  std::size_t interior_count() const { return interior_.size(); }
  std::size_t boundary_count() const { return boundary_.size(); }
  std::span<const LatticePoint> interior_points() const { return interior_; }
  std::span<const LatticePoint> boundary_points() const { return boundary_; }
  LatticePoint interior_point(VertexId v) const { return interior_.at(v); }
  Point position(VertexId v) const;
  Point position(LatticePoint p) const { return {p.i * mesh_, p.j * mesh_}; }

  std::optional<VertexId> interior_index(LatticePoint p) const;
  std::optional<VertexId> nearest_interior(Point p) const;

  std::span<const Edge> edges() const { return edges_; }
  const std::array<Neighbor, 4>& neighbors(VertexId v) const { return neighbors_[v]; }
  bool touches_boundary(VertexId v) const;

  /// Index range of the interior's bounding grid (inclusive).
  std::int32_t i_min() const { return i_min_; }
  std::int32_t i_max() const { return i_max_; }
  std::int32_t j_min() const { return j_min_; }
  std::int32_t j_max() const { return j_max_; }
  std::int32_t grid_width() const { return i_max_ - i_min_ + 1; }
  std::int32_t grid_height() const { return j_max_ - j_min_ + 1; }

 private:
  LatticeDomain() = default;

  DomainSpec shape_;
  int level_ = 0;
  double mesh_ = 1.0;
  std::vector<LatticePoint> interior_;
  std::vector<LatticePoint> boundary_;
  std::vector<Edge> edges_;
  std::vector<std::array<Neighbor, 4>> neighbors_;
  std::int32_t i_min_ = 0, i_max_ = -1, j_min_ = 0, j_max_ = -1;
  // Dense lookup over the interior bounding grid padded by one cell:
  // >= 0 interior index, -1 otherwise.
  std::vector<std::int32_t> lookup_;
};

std::shared_ptr<const LatticeDomain> build_domain(const DomainSpec& shape, int level);

/// Real values on the interior vertices of a domain; boundary values are 0.
class Field {
 public:
  Field(std::shared_ptr<const LatticeDomain> domain, std::vector<double> values);
  static Field zeros(std::shared_ptr<const LatticeDomain> domain);

  const LatticeDomain& domain() const { return *domain_; }
  const std::shared_ptr<const LatticeDomain>& domain_ptr() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](VertexId v) const { return values_[v]; }
  double& operator[](VertexId v) { return values_[v]; }

  Field negated() const;
  Field scaled(double factor) const;

 private:
  std::shared_ptr<const LatticeDomain> domain_;
  std::vector<double> values_;
};

class SparseCholesky;

/// Factorized Dirichlet graph Laplacian of a domain. Immutable after
/// construction; safe to share between threads.
class GreenOperator {
 public:
  explicit GreenOperator(std::shared_ptr<const LatticeDomain> domain);
  ~GreenOperator();
  GreenOperator(GreenOperator&&) noexcept;
  GreenOperator& operator=(GreenOperator&&) noexcept;

  const LatticeDomain& domain() const { return *domain_; }
  const std::shared_ptr<const LatticeDomain>& domain_ptr() const { return domain_; }

  /// (L^{-1})_{vw}. Throws std::out_of_range for non-interior indices.
  double green(VertexId v, VertexId w) const;
  /// Column w of L^{-1}.
  std::vector<double> column(VertexId w) const;
  std::vector<double> solve(std::span<const double> rhs) const;
  /// diag(L^{-1}) by selected inversion of the factor. Computed on first use.
  std::span<const double> diagonal() const;

  /// Draws a centred Gaussian vector with covariance L^{-1}.
  Field sample(Rng& rng) const;
  /// Same, from caller-provided standard normals (size = interior count).
  Field sample_from_normals(std::span<const double> normals) const;

  const SparseCholesky& factor() const { return *factor_; }

 private:
  std::shared_ptr<const LatticeDomain> domain_;
  std::unique_ptr<SparseCholesky> factor_;
};

Field sample_field(const GreenOperator& gop, Rng& rng);

}  // namespace gffexc
