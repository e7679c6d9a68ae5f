#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gffexc/excursions.hpp"
#include "gffexc/grid_function.hpp"
#include "gffexc/lattice.hpp"
#include "gffexc/stats.hpp"

namespace gffexc {

/// Settings for one harness run.
///
/// Grammar: one `key = value` per line; `# ...` comments; blank lines; section
/// headers `[name]` group keys for readability and do not change their meaning.
/// Keys and value forms:
///   domain            square(side=2, center=0,0) | rect(x0,y0,x1,y1) | polygon(x:y, ...)   (required)
///   n                 integer >= 2
///   n_list            comma-separated integers >= 2 (defaults to n)
///   M                 replicas >= 1
///   seed              unsigned 64-bit
///   out               output directory
///   f                 one | halfplane | bump | eigen11
///   a_grid, b_grid    comma-separated reals in (0, 1)
///   K                 number of top clusters >= 2
///   J                 all | none | comma-separated 1-based ranks
///   q                 moment order >= 1
///   s                 Sobolev exponent > 0
///   checks            comma-separated stats checks
///   corrupt           true | false
///   min_hole_vertices integer >= 4
///   mode              metric | discrete
///   r_over_h          comma-separated radii in mesh units > 0
///   probes            comma-separated x:y points
///   path_y, path_end_x reals
///   rho_list          comma-separated reals in [-1, 1]
///   pairs             integer >= 1
///   raster            true | false
struct ExperimentConfig {
  DomainSpec domain;
  int n = 6;
  std::vector<int> n_list;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  std::string out = "out";
  NamedFunction f = NamedFunction::one;
  std::vector<double> a_grid{0.2, 0.3, 0.4};
  std::vector<double> b_grid{0.4, 0.5, 0.6};
  std::size_t top = 8;
  RankSet ranks = RankSet::first(1);
  std::size_t q = 2;
  double sobolev_exponent = 1.1;
  std::vector<std::string> checks{"l2", "moment", "sign-independence", "height-gap", "tail", "partial-sums"};
  bool corrupt = false;
  std::size_t min_hole_vertices = 16;
  DecompositionMode mode = DecompositionMode::metric;
  std::vector<double> r_over_h{2.0, 4.0, 8.0};
  std::vector<Point> probes{{0.5, 0.5}, {-0.5, 0.5}};
  double path_y = 0.0;
  double path_end_x = 0.0;
  std::vector<double> rho_list{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::size_t pairs = 1000000;
  bool raster = false;

  /// Levels to run: n_list when set, otherwise {n}.
  std::vector<int> levels() const;
  /// Canonical `key = value` echo of every setting.
  std::string echo() const;
};

struct ConfigError {
  std::size_t line = 0;  // 1-based; 0 for errors not tied to a line
  std::string message;
};

struct ConfigParse {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return config.has_value(); }
};

/// Validates every line and reports all errors, not just the first.
ConfigParse parse_config(std::string_view text);

/// Default configuration on (-1, 1)^2, used when no file is given.
ExperimentConfig default_config();

std::string_view to_string(DecompositionMode mode);

}  // namespace gffexc
