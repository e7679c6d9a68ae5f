#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "gffexc/excursions.hpp"
#include "gffexc/replica.hpp"

namespace gffexc {

struct HeightGapConstants {
  static constexpr double lambda = 0.62665706865775012560;      // sqrt(pi/8)
  static constexpr double two_lambda = 1.25331413731550025121;  // sqrt(pi/2)
};

/// Set of 1-based cluster ranks, or every cluster.
struct RankSet {
  bool all = false;
  std::vector<std::size_t> ranks;

  static RankSet every() { return {true, {}}; }
  static RankSet none() { return {false, {}}; }
  static RankSet first(std::size_t k);
  bool contains(std::size_t rank) const;
};

/// Both sides of the moment relation on common samples:
///   E[(phi, f)^{2q}]  vs  sum_{k in J} E[(nu_k, f)^{2q}] + E[(rest, f)^{2q}],
/// with rest = (phi, f) - sum_{k in J} sigma_k (nu_k, f).
struct OrthogonalityReport {
  std::size_t q = 1;
  std::size_t samples = 0;
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  double rhs_se = 0.0;
  double difference = 0.0;     // lhs - rhs
  double difference_se = 0.0;  // s.e. of the paired per-sample difference
  double max_abs_rest = 0.0;   // largest |(rest, f)| seen
  bool pass = false;
};

/// Per-sample terms of the moment relation.
struct MomentTerms {
  double lhs = 0.0;
  double clusters = 0.0;
  double rest = 0.0;  // (rest, f), not raised to a power
};

MomentTerms moment_terms(const Decomposition& decomposition, const Field& field, std::span<const double> f,
                         const RankSet& ranks, std::size_t q);

/// q = 1. pass iff |difference| <= 3 difference_se, and, when J is every
/// cluster, |rest| <= 1e-10 on every sample. Requires samples >= 100.
OrthogonalityReport l2_identity_check(const GreenOperator& gop, std::span<const double> f, const RankSet& ranks,
                                      std::size_t samples, std::uint64_t base_seed);

/// pass iff lhs >= rhs - 3 difference_se. Requires q >= 1.
OrthogonalityReport moment_inequality_check(const GreenOperator& gop, std::span<const double> f,
                                            const RankSet& ranks, std::size_t q, std::size_t samples,
                                            std::uint64_t base_seed);

struct SignTestReport {
  std::size_t top = 0;
  std::size_t samples_used = 0;
  std::size_t samples_skipped = 0;
  double threshold = 0.0;  // 3 / sqrt(samples_used)
  std::vector<double> mean;                      // per rank
  std::vector<std::vector<double>> correlation;  // rank x rank
  std::vector<double> diameter_correlation;
  std::vector<double> mass_correlation;
  bool means_pass = false;
  bool pairwise_pass = false;
  bool rest_pass = false;  // sign versus diameter and mass
  bool pass = false;       // means and pairwise
};

/// Signs of the `top` largest clusters over independent samples. With
/// `corrupt`, sigma_2 is overwritten by sigma_1 to exercise the test's power.
SignTestReport sign_independence_test(const GreenOperator& gop, std::size_t top, std::size_t samples,
                                      std::uint64_t base_seed, bool corrupt = false);

/// Pearson correlation; NaN when either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Regions used by the height-gap statistic in one sample.
///
/// For an outermost cluster C (one not separated from the boundary by any
/// other cluster), the filled region is C together with everything it
/// separates from the boundary. Its lattice interior drops the vertices with a
/// neighbour outside the region, where the outer zero cuts sit. Holes are the
/// connected components of the filled region minus C.
struct HeightGapSample {
  double interior_sum = 0.0;       // sum of sigma * phi over lattice interiors of qualifying regions
  std::size_t interior_count = 0;
  double filled_sum = 0.0;         // same over whole qualifying regions
  std::size_t filled_count = 0;
  std::vector<double> filled_means;  // per region, lattice interior
  std::vector<double> hole_means;  // -sigma * (mean of phi over the hole)
  std::vector<std::size_t> hole_sizes;
};

/// Outermost owner per vertex: the rank of the outermost cluster enclosing
/// it (itself included), or -1 when no cluster separates it from the boundary.
std::vector<std::int32_t> outermost_owner(const Decomposition& decomposition);

/// Filled regions count only when the cluster does not touch the boundary and
/// the region has at least `min_vertices` vertices; holes need at least
/// `min_vertices` vertices.
HeightGapSample height_gap_sample(const Decomposition& decomposition, const Field& field,
                                  std::size_t min_vertices);

struct HeightGapReport {
  DecompositionMode mode = DecompositionMode::metric;
  std::size_t samples = 0;
  double target = 0.0;  // 2 lambda (metric) or lambda (discrete)
  // Area-weighted mean of sigma * phi over the lattice interiors of filled
  // regions, with its s.e.
  std::size_t regions = 0;
  double statistic = 0.0;
  double standard_error = 0.0;
  double region_mean = 0.0;            // each region weighted equally
  double full_region_statistic = 0.0;  // whole regions, boundary row included
  // Mean of -sigma * (hole mean) over holes.
  std::size_t holes = 0;
  double hole_statistic = 0.0;
  double hole_standard_error = 0.0;
  bool insufficient_regions = false;
  bool insufficient_holes = false;
};

/// Requires min_vertices >= 4.
HeightGapReport height_gap_statistic(const GreenOperator& gop, DecompositionMode mode, std::size_t min_vertices,
                                     std::size_t samples, std::uint64_t base_seed);

struct ProbeResult {
  VertexId vertex = 0;
  Point position;
  std::size_t used = 0;
  std::size_t skipped = 0;
  double mean = 0.0;  // mean of residual^2 - G_complement(p, p)
  double standard_error = 0.0;
  double z = 0.0;
  double mean_residual_sq = 0.0;
  double mean_green = 0.0;
};

struct MarkovReport {
  std::size_t samples = 0;
  std::vector<ProbeResult> probes;
  bool pass = false;  // |z| <= 3 at every probe
};

/// Complement of gamma^exc with its Dirichlet Laplacian. An edge from the
/// complement to gamma^exc keeps conductance 1/(1 - tau), where tau is the
/// first zero of the edge bridge measured from the gamma^exc end.
struct ComplementGreen {
  std::vector<std::int32_t> index;  // per interior vertex, -1 inside gamma^exc
  std::vector<double> diagonal;     // G_complement(p, p) for requested probes
};

ComplementGreen complement_green(const Field& field, std::span<const VertexId> gamma,
                                 std::span<const VertexId> probes, Rng& rng);

MarkovReport markov_check(const GreenOperator& gop, std::span<const VertexId> path, std::span<const VertexId> probes,
                          std::size_t samples, std::uint64_t base_seed);

/// Horizontal path at height y from the vertex next to the left boundary to
/// the vertex nearest x_end.
std::vector<VertexId> horizontal_path(const LatticeDomain& domain, double y, double x_end);

/// h^4 sum_{x, y in sub} G_D(x, y) G_sub(x, y), with G_sub the Dirichlet
/// Green function of the induced subgraph (block diagonal over components).
double tail_norm(const GreenOperator& gop, std::span<const VertexId> subdomain);

/// Median H^{-s} norm of phi - partial_sum(N) over samples, for N on a
/// doubling grid 0, 1, 2, 4, ... up to the largest cluster count seen.
struct PartialSumProfile {
  std::size_t samples = 0;
  std::vector<std::size_t> counts;
  std::vector<double> median_residual;
  double median_field_norm = 0.0;
  /// Median residual once every cluster of diameter > resolved_diameter is summed.
  double median_resolved_residual = 0.0;
  double resolved_diameter = 0.0;
};

PartialSumProfile partial_sum_profile(const GreenOperator& gop, double exponent, double resolved_diameter,
                                      std::size_t samples, std::uint64_t base_seed);

/// Smallest lattice-aligned square with lower-left corner at the domain's
/// bounding box corner that contains the box.
Rectangle embedding_square(const LatticeDomain& domain);

/// Interior vertices off the grid lines that cut the bounding box into
/// 2^level x 2^level equal blocks.
std::vector<VertexId> dyadic_blocks(const LatticeDomain& domain, int level);

}  // namespace gffexc
