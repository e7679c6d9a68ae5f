#include "gffexc/grid_function.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gffexc {

NamedFunction parse_named_function(std::string_view name) {
  if (name == "one") return NamedFunction::one;
  if (name == "halfplane") return NamedFunction::halfplane;
  if (name == "bump") return NamedFunction::bump;
  if (name == "eigen11") return NamedFunction::eigen11;
  throw std::invalid_argument("unknown test function '" + std::string(name) + "'");
}

std::string_view to_string(NamedFunction f) {
  switch (f) {
    case NamedFunction::one: return "one";
    case NamedFunction::halfplane: return "halfplane";
    case NamedFunction::bump: return "bump";
    case NamedFunction::eigen11: return "eigen11";
  }
  return "unknown";
}

GridFunction make_grid_function(const LatticeDomain& domain, NamedFunction f) {
  const Rectangle box = domain.bounding_box();
  const double cx = 0.5 * (box.x0 + box.x1);
  const double cy = 0.5 * (box.y0 + box.y1);
  const double radius = 0.25 * std::min(box.width(), box.height());
  GridFunction out(domain.interior_count());
  for (std::size_t v = 0; v < out.size(); ++v) {
    const Point p = domain.position(static_cast<VertexId>(v));
    switch (f) {
      case NamedFunction::one:
        out[v] = 1.0;
        break;
      case NamedFunction::halfplane:
        out[v] = p.x < cx ? 1.0 : 0.0;
        break;
      case NamedFunction::bump: {
        const double r2 = ((p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy)) / (radius * radius);
        out[v] = r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
        break;
      }
      case NamedFunction::eigen11:
        out[v] = std::sin(std::numbers::pi * (p.x - box.x0) / box.width()) *
                 std::sin(std::numbers::pi * (p.y - box.y0) / box.height());
        break;
    }
  }
  return out;
}

GridFunction constant_function(const LatticeDomain& domain, double value) {
  return GridFunction(domain.interior_count(), value);
}

}  // namespace gffexc
