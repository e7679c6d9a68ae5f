#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gffexc/lattice.hpp"

namespace gffexc {

/// Test function sampled at the interior vertices of a domain.
using GridFunction = std::vector<double>;

/// Named test functions, all defined relative to the domain's bounding box:
///   one       f = 1
///   halfplane f = 1 left of the box's vertical midline, else 0
///   bump      smooth compactly supported bump at the box centre
///   eigen11   sin(pi (x - x0)/W) sin(pi (y - y0)/H)
enum class NamedFunction { one, halfplane, bump, eigen11 };

NamedFunction parse_named_function(std::string_view name);
std::string_view to_string(NamedFunction f);

GridFunction make_grid_function(const LatticeDomain& domain, NamedFunction f);
GridFunction constant_function(const LatticeDomain& domain, double value);

}  // namespace gffexc
