#include "gffexc/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "gffexc/sparse_cholesky.hpp"

namespace gffexc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw std::invalid_argument("bad number '" + std::string(text) + "' in domain spec");
  }
  return value;
}

// Splits "a=1, b=2,3, c=4" into {"a=1", "b=2,3", "c=4"}: pieces without '='
// continue the previous value.
std::vector<std::string> split_arguments(std::string_view args, bool keyed) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= args.size()) {
    std::size_t comma = args.find(',', start);
    if (comma == std::string_view::npos) comma = args.size();
    std::string piece(trim(args.substr(start, comma - start)));
    if (keyed && !out.empty() && piece.find('=') == std::string::npos) {
      out.back() += "," + piece;
    } else if (!piece.empty()) {
      out.push_back(std::move(piece));
    }
    start = comma + 1;
  }
  return out;
}

bool on_segment(Point p, Point a, Point b) {
  if (a.x == b.x) {
    return p.x == a.x && p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
  }
  return p.y == a.y && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x);
}

constexpr std::array<std::array<int, 2>, 4> kDirections{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

}  // namespace

DomainSpec::DomainSpec(Rectangle rect) : shape_(rect) {
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) {
    throw std::invalid_argument("rectangle must have positive width and height");
  }
}

DomainSpec::DomainSpec(RectilinearPolygon polygon) : shape_(std::move(polygon)) {
  const auto& corners = std::get<RectilinearPolygon>(shape_).corners;
  if (corners.size() < 4 || corners.size() % 2 != 0) {
    throw std::invalid_argument("rectilinear polygon needs an even number (>= 4) of corners");
  }
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const Point a = corners[k];
    const Point b = corners[(k + 1) % corners.size()];
    if ((a.x == b.x) == (a.y == b.y)) {
      throw std::invalid_argument("polygon edges must be axis-aligned and non-degenerate");
    }
  }
}

DomainSpec DomainSpec::square(double side, Point center) {
  if (!(side > 0.0)) throw std::invalid_argument("square side must be positive");
  const double half = side / 2.0;
  return DomainSpec(Rectangle{center.x - half, center.y - half, center.x + half, center.y + half});
}

DomainSpec DomainSpec::parse(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw std::invalid_argument("domain spec must look like name(args)");
  }
  const std::string_view name = trim(text.substr(0, open));
  const std::string_view args = text.substr(open + 1, text.size() - open - 2);

  if (name == "polygon") {
    RectilinearPolygon polygon;
    for (const auto& token : split_arguments(args, false)) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("polygon corner must be x:y");
      polygon.corners.push_back({parse_number(std::string_view(token).substr(0, colon)),
                                 parse_number(std::string_view(token).substr(colon + 1))});
    }
    return DomainSpec(std::move(polygon));
  }

  std::vector<std::pair<std::string, std::string>> keyed;
  for (const auto& token : split_arguments(args, true)) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value in domain spec");
    keyed.emplace_back(std::string(trim(std::string_view(token).substr(0, eq))),
                       std::string(trim(std::string_view(token).substr(eq + 1))));
  }
  auto take = [&](std::string_view key) -> std::optional<std::string> {
    for (const auto& [k, v] : keyed) {
      if (k == key) return v;
    }
    return std::nullopt;
  };
  for (const auto& [k, v] : keyed) {
    const bool known = (name == "square" && (k == "side" || k == "center")) ||
                       (name == "rect" && (k == "x0" || k == "y0" || k == "x1" || k == "y1"));
    if (!known) throw std::invalid_argument("unknown domain parameter '" + k + "'");
  }

  if (name == "square") {
    const auto side = take("side");
    if (!side) throw std::invalid_argument("square requires side=");
    Point center{0.0, 0.0};
    if (const auto c = take("center")) {
      const auto comma = c->find(',');
      if (comma == std::string::npos) throw std::invalid_argument("center must be x,y");
      center = {parse_number(std::string_view(*c).substr(0, comma)),
                parse_number(std::string_view(*c).substr(comma + 1))};
    }
    return square(parse_number(*side), center);
  }
  if (name == "rect") {
    const auto x0 = take("x0");
    const auto y0 = take("y0");
    const auto x1 = take("x1");
    const auto y1 = take("y1");
    if (!x0 || !y0 || !x1 || !y1) throw std::invalid_argument("rect requires x0, y0, x1, y1");
    return DomainSpec(Rectangle{parse_number(*x0), parse_number(*y0), parse_number(*x1),
                                parse_number(*y1)});
  }
  throw std::invalid_argument("unsupported domain shape '" + std::string(name) + "'");
}

bool DomainSpec::contains_strictly(Point p) const {
  if (const auto* rect = std::get_if<Rectangle>(&shape_)) {
    return p.x > rect->x0 && p.x < rect->x1 && p.y > rect->y0 && p.y < rect->y1;
  }
  const auto& corners = std::get<RectilinearPolygon>(shape_).corners;
  bool inside = false;
  for (std::size_t k = 0, m = corners.size(); k < m; ++k) {
    const Point a = corners[k];
    const Point b = corners[(k + 1) % m];
    if (on_segment(p, a, b)) return false;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

Rectangle DomainSpec::bounding_box() const {
  if (const auto* rect = std::get_if<Rectangle>(&shape_)) return *rect;
  const auto& corners = std::get<RectilinearPolygon>(shape_).corners;
  Rectangle box{corners[0].x, corners[0].y, corners[0].x, corners[0].y};
  for (const auto& c : corners) {
    box.x0 = std::min(box.x0, c.x);
    box.y0 = std::min(box.y0, c.y);
    box.x1 = std::max(box.x1, c.x);
    box.y1 = std::max(box.y1, c.y);
  }
  return box;
}

std::string DomainSpec::to_string() const {
  std::ostringstream out;
  out.precision(17);
  if (const auto* rect = std::get_if<Rectangle>(&shape_)) {
    out << "rect(x0=" << rect->x0 << ", y0=" << rect->y0 << ", x1=" << rect->x1
        << ", y1=" << rect->y1 << ")";
    return out.str();
  }
  out << "polygon(";
  const auto& corners = std::get<RectilinearPolygon>(shape_).corners;
  for (std::size_t k = 0; k < corners.size(); ++k) {
    if (k) out << ", ";
    out << corners[k].x << ":" << corners[k].y;
  }
  out << ")";
  return out.str();
}

std::shared_ptr<const LatticeDomain> LatticeDomain::build(const DomainSpec& shape, int level) {
  if (level < 2) throw std::invalid_argument("refinement level must be >= 2");
  if (level > 24) throw std::invalid_argument("refinement level too large");

  auto domain = std::shared_ptr<LatticeDomain>(new LatticeDomain());
  domain->shape_ = shape;
  domain->level_ = level;
  domain->mesh_ = std::ldexp(1.0, -level);
  const double h = domain->mesh_;

  const Rectangle box = shape.bounding_box();
  const auto lo_i = static_cast<std::int64_t>(std::floor(box.x0 / h));
  const auto hi_i = static_cast<std::int64_t>(std::ceil(box.x1 / h));
  const auto lo_j = static_cast<std::int64_t>(std::floor(box.y0 / h));
  const auto hi_j = static_cast<std::int64_t>(std::ceil(box.y1 / h));
  if ((hi_i - lo_i + 1) * (hi_j - lo_j + 1) > (std::int64_t{1} << 28)) {
    throw std::invalid_argument("domain too large for this refinement level");
  }

  for (std::int64_t i = lo_i; i <= hi_i; ++i) {
    for (std::int64_t j = lo_j; j <= hi_j; ++j) {
      const LatticePoint p{static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)};
      if (shape.contains_strictly(domain->position(p))) domain->interior_.push_back(p);
    }
  }
  if (domain->interior_.empty()) throw std::invalid_argument("degenerate domain");

  auto& d = *domain;
  d.i_min_ = d.i_max_ = d.interior_.front().i;
  d.j_min_ = d.j_max_ = d.interior_.front().j;
  for (const auto& p : d.interior_) {
    d.i_min_ = std::min(d.i_min_, p.i);
    d.i_max_ = std::max(d.i_max_, p.i);
    d.j_min_ = std::min(d.j_min_, p.j);
    d.j_max_ = std::max(d.j_max_, p.j);
  }
  const std::int64_t padded_w = d.grid_width() + 2;
  const std::int64_t padded_h = d.grid_height() + 2;
  auto slot = [&](LatticePoint p) {
    return static_cast<std::size_t>((p.i - d.i_min_ + 1) * padded_h + (p.j - d.j_min_ + 1));
  };
  d.lookup_.assign(static_cast<std::size_t>(padded_w * padded_h), -1);
  for (std::size_t v = 0; v < d.interior_.size(); ++v) {
    d.lookup_[slot(d.interior_[v])] = static_cast<std::int32_t>(v);
  }

  std::vector<std::int32_t> boundary_slot(d.lookup_.size(), -1);
  d.neighbors_.resize(d.interior_.size());
  for (std::size_t v = 0; v < d.interior_.size(); ++v) {
    const LatticePoint p = d.interior_[v];
    for (std::size_t dir = 0; dir < 4; ++dir) {
      const LatticePoint q{p.i + kDirections[dir][0], p.j + kDirections[dir][1]};
      const std::size_t s = slot(q);
      Neighbor& nb = d.neighbors_[v][dir];
      if (d.lookup_[s] >= 0) {
        nb.index = static_cast<std::uint32_t>(d.lookup_[s]);
        nb.boundary = false;
      } else {
        if (boundary_slot[s] < 0) {
          boundary_slot[s] = static_cast<std::int32_t>(d.boundary_.size());
          d.boundary_.push_back(q);
        }
        nb.index = static_cast<std::uint32_t>(boundary_slot[s]);
        nb.boundary = true;
      }
    }
  }

  // Edges: each interior-interior pair once (from the smaller index), each
  // interior-boundary pair once per incident direction.
  for (std::size_t v = 0; v < d.interior_.size(); ++v) {
    for (std::size_t dir = 0; dir < 4; ++dir) {
      Neighbor& nb = d.neighbors_[v][dir];
      if (nb.boundary || nb.index > v) {
        nb.edge = static_cast<EdgeId>(d.edges_.size());
        d.edges_.push_back(Edge{static_cast<VertexId>(v), nb.index, nb.boundary});
      } else {
        // Opposite direction slot of the neighbour already owns the edge.
        const std::size_t back = dir ^ 1U;
        nb.edge = d.neighbors_[nb.index][back].edge;
      }
    }
  }

  // The interior graph must be connected.
  std::vector<char> seen(d.interior_.size(), 0);
  std::queue<VertexId> queue;
  queue.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop();
    for (const auto& nb : d.neighbors_[v]) {
      if (!nb.boundary && !seen[nb.index]) {
        seen[nb.index] = 1;
        ++reached;
        queue.push(nb.index);
      }
    }
  }
  if (reached != d.interior_.size()) throw std::invalid_argument("disconnected domain");

  return domain;
}

std::shared_ptr<const LatticeDomain> build_domain(const DomainSpec& shape, int level) {
  return LatticeDomain::build(shape, level);
}

Point LatticeDomain::position(VertexId v) const { return position(interior_.at(v)); }

std::optional<VertexId> LatticeDomain::interior_index(LatticePoint p) const {
  if (p.i < i_min_ || p.i > i_max_ || p.j < j_min_ || p.j > j_max_) return std::nullopt;
  const auto s = static_cast<std::size_t>((p.i - i_min_ + 1) * (grid_height() + 2) +
                                          (p.j - j_min_ + 1));
  const std::int32_t v = lookup_[s];
  if (v < 0) return std::nullopt;
  return static_cast<VertexId>(v);
}

std::optional<VertexId> LatticeDomain::nearest_interior(Point p) const {
  const LatticePoint rounded{static_cast<std::int32_t>(std::lround(p.x / mesh_)),
                             static_cast<std::int32_t>(std::lround(p.y / mesh_))};
  if (auto v = interior_index(rounded)) return v;
  std::optional<VertexId> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < interior_.size(); ++v) {
    const Point q = position(static_cast<VertexId>(v));
    const double d2 = (q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<VertexId>(v);
    }
  }
  return best;
}

bool LatticeDomain::touches_boundary(VertexId v) const {
  for (const auto& nb : neighbors_[v]) {
    if (nb.boundary) return true;
  }
  return false;
}

Field::Field(std::shared_ptr<const LatticeDomain> domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (!domain_) throw std::invalid_argument("field requires a domain");
  if (values_.size() != domain_->interior_count()) {
    throw std::invalid_argument("field size does not match domain");
  }
  for (double x : values_) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite field value");
  }
}

Field Field::zeros(std::shared_ptr<const LatticeDomain> domain) {
  const std::size_t n = domain->interior_count();
  return Field(std::move(domain), std::vector<double>(n, 0.0));
}

Field Field::negated() const { return scaled(-1.0); }

Field Field::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& x : out) x *= factor;
  return Field(domain_, std::move(out));
}

namespace {

SparseCholesky::Matrix assemble_laplacian(const LatticeDomain& domain) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> triplets;
  triplets.reserve(domain.interior_count() * 5);
  for (std::size_t v = 0; v < domain.interior_count(); ++v) {
    triplets.emplace_back(static_cast<int>(v), static_cast<int>(v), 4.0);
    for (const auto& nb : domain.neighbors(static_cast<VertexId>(v))) {
      if (!nb.boundary) triplets.emplace_back(static_cast<int>(v), static_cast<int>(nb.index), -1.0);
    }
  }
  const auto n = static_cast<Eigen::Index>(domain.interior_count());
  SparseCholesky::Matrix laplacian(n, n);
  laplacian.setFromTriplets(triplets.begin(), triplets.end());
  return laplacian;
}

}  // namespace

GreenOperator::GreenOperator(std::shared_ptr<const LatticeDomain> domain)
    : domain_(std::move(domain)),
      factor_(std::make_unique<SparseCholesky>(assemble_laplacian(*domain_))) {}

GreenOperator::~GreenOperator() = default;
GreenOperator::GreenOperator(GreenOperator&&) noexcept = default;
GreenOperator& GreenOperator::operator=(GreenOperator&&) noexcept = default;

std::vector<double> GreenOperator::column(VertexId w) const {
  if (w >= domain_->interior_count()) throw std::out_of_range("vertex is not interior");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain_->interior_count()));
  rhs[w] = 1.0;
  const Eigen::VectorXd x = factor_->solve(rhs);
  return {x.data(), x.data() + x.size()};
}

double GreenOperator::green(VertexId v, VertexId w) const {
  if (v >= domain_->interior_count() || w >= domain_->interior_count()) {
    throw std::out_of_range("vertex is not interior");
  }
  return column(w)[v];
}

std::vector<double> GreenOperator::solve(std::span<const double> rhs) const {
  if (rhs.size() != domain_->interior_count()) throw std::invalid_argument("rhs size mismatch");
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  const Eigen::VectorXd x = factor_->solve(b);
  return {x.data(), x.data() + x.size()};
}

std::span<const double> GreenOperator::diagonal() const { return factor_->inverse_diagonal(); }

Field GreenOperator::sample(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(domain_->interior_count());
  for (double& x : z) x = normal(rng);
  return sample_from_normals(z);
}

Field GreenOperator::sample_from_normals(std::span<const double> normals) const {
  if (normals.size() != domain_->interior_count()) throw std::invalid_argument("normals size mismatch");
  Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(normals.data(), static_cast<Eigen::Index>(normals.size()));
  const Eigen::VectorXd x = factor_->correlate(z);
  return Field(domain_, std::vector<double>(x.data(), x.data() + x.size()));
}

Field sample_field(const GreenOperator& gop, Rng& rng) { return gop.sample(rng); }

}  // namespace gffexc
