#include "gffexc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "gffexc/crossing.hpp"
#include "gffexc/minkowski.hpp"
#include "gffexc/replica.hpp"
#include "gffexc/seeds.hpp"
#include "gffexc/spinmodel.hpp"
#include "gffexc/stats.hpp"

namespace gffexc {

std::string_view version() { return GFFEXC_VERSION; }

const std::vector<std::string_view>& subcommands() {
  static const std::vector<std::string_view> names{"sample", "decompose", "minkowski", "crossing",
                                                    "spin",   "stats",     "markov",    "conjecture"};
  return names;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += '\n';
}

void CsvTable::cell(std::string_view text) {
  if (filled_ == columns_) throw std::logic_error("too many CSV cells in row");
  if (filled_++ > 0) text_ += ',';
  text_ += text;
}

CsvTable& CsvTable::operator<<(double value) {
  cell(format_number(value));
  return *this;
}
CsvTable& CsvTable::operator<<(std::int64_t value) {
  cell(std::to_string(value));
  return *this;
}
CsvTable& CsvTable::operator<<(std::size_t value) {
  cell(std::to_string(value));
  return *this;
}
CsvTable& CsvTable::operator<<(int value) {
  cell(std::to_string(value));
  return *this;
}
CsvTable& CsvTable::operator<<(std::string_view value) {
  cell(value);
  return *this;
}

void CsvTable::end_row() {
  if (filled_ != columns_) throw std::logic_error("incomplete CSV row");
  text_ += '\n';
  filled_ = 0;
  ++rows_;
}

namespace {

namespace fs = std::filesystem;

class Session {
 public:
  Session(const ExperimentConfig& config, std::ostream& log) : config_(config), log_(log) {
    fs::create_directories(config.out);
  }

  void write(const std::string& name, const CsvTable& table) {
    const fs::path path = fs::path(config_.out) / name;
    std::ofstream out(path, std::ios::binary);
    out << table.text();
    if (!out) throw std::runtime_error("cannot write " + path.string());
    summary.table_rows[name] = table.rows();
    log_ << "wrote " << path.string() << " (" << table.rows() << " rows)\n";
  }

  void require(bool ok, const std::string& what) {
    log_ << (ok ? "PASS " : "FAIL ") << what << '\n';
    if (!ok) summary.failures.push_back(what);
  }

  void note(const std::string& what) {
    log_ << "NOTE " << what << '\n';
    summary.notes.push_back(what);
  }

  std::shared_ptr<const GreenOperator> green(int n) { return cache_.get(config_.domain, n); }
  GreenCache& cache() { return cache_; }
  std::ostream& log() { return log_; }

  RunSummary summary;

 private:
  const ExperimentConfig& config_;
  std::ostream& log_;
  GreenCache cache_;
};

std::string ranks_text(const RankSet& r) {
  if (r.all) return "all";
  if (r.ranks.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < r.ranks.size(); ++i) out += (i ? ";" : "") + std::to_string(r.ranks[i]);
  return out;
}

// --- sample ---------------------------------------------------------------

void run_sample(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "vertex", "x", "y", "green_vv", "empirical_var", "se"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const std::size_t size = gop->domain().interior_count();
    std::vector<double> sum(size, 0.0), sum4(size, 0.0);
    constexpr std::size_t chunk = 32;
    std::vector<std::vector<double>> buffer(chunk);
    for (std::size_t start = 0; start < c.samples; start += chunk) {
      const std::size_t count = std::min(chunk, c.samples - start);
      for_each_replica(count, [&](std::size_t k) {
        Rng rng(derive_seed(c.seed, start + k, StreamTag::field));
        const Field f = gop->sample(rng);
        buffer[k].assign(f.values().begin(), f.values().end());
      });
      for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t v = 0; v < size; ++v) {
          const double sq = buffer[k][v] * buffer[k][v];
          sum[v] += sq;
          sum4[v] += sq * sq;
        }
      }
    }
    const auto diag = gop->diagonal();
    const double m = static_cast<double>(c.samples);
    for (VertexId v = 0; v < size; ++v) {
      const double var = sum[v] / m;
      const double se = std::sqrt(std::max(0.0, sum4[v] / m - var * var) / m);
      const Point p = gop->domain().position(v);
      table << n << static_cast<std::size_t>(v) << p.x << p.y << diag[v] << var << se;
      table.end_row();
    }
  }
  s.write("variance.csv", table);
}

// --- decompose ------------------------------------------------------------

bool partition_refines(const Decomposition& fine, const Decomposition& coarse) {
  for (const auto& cl : fine.clusters) {
    const auto target = coarse.cluster_of[cl.vertices.front()];
    for (VertexId v : cl.vertices) {
      if (coarse.cluster_of[v] != target) return false;
    }
  }
  return true;
}

void run_decompose(const ExperimentConfig& c, Session& s) {
  CsvTable clusters({"n", "replica", "rank", "id", "sign", "size", "mass", "diameter"});
  CsvTable finiteness({"n", "delta", "mean_count"});
  const std::vector<double> deltas{0.1, 0.2, 0.4};
  std::vector<std::vector<double>> mean_counts;
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    struct Result {
      Decomposition decomposition;
      double reconstruction_error = 0.0;
      bool refines = false;
    };
    std::vector<Result> results(c.samples);
    for_each_replica(c.samples, [&](std::size_t r) {
      Replica rep = draw_replica(*gop, c.seed, r, c.mode);
      const Field back = reconstruct(rep.decomposition, rep.field);
      double err = 0.0;
      for (std::size_t v = 0; v < back.size(); ++v) {
        err = std::max(err, std::abs(back[static_cast<VertexId>(v)] - rep.field[static_cast<VertexId>(v)]));
      }
      results[r].refines = partition_refines(rep.decomposition, decompose_discrete(rep.field));
      results[r].reconstruction_error = err;
      results[r].decomposition = std::move(rep.decomposition);
    });
    double worst = 0.0;
    bool refines = true, ordered = true;
    std::vector<double> counts(deltas.size(), 0.0);
    for (std::size_t r = 0; r < results.size(); ++r) {
      const auto& d = results[r].decomposition;
      worst = std::max(worst, results[r].reconstruction_error);
      refines = refines && results[r].refines;
      for (std::size_t k = 0; k < d.size(); ++k) {
        const auto& cl = d.clusters[k];
        if (k > 0) {
          const auto& prev = d.clusters[k - 1];
          ordered = ordered && (prev.diameter_sq_lattice > cl.diameter_sq_lattice ||
                                (prev.diameter_sq_lattice == cl.diameter_sq_lattice && prev.id < cl.id));
        }
        clusters << n << r << k + 1 << static_cast<std::size_t>(cl.id) << cl.sign << cl.vertices.size() << cl.mass
                 << cl.diameter;
        clusters.end_row();
        for (std::size_t i = 0; i < deltas.size(); ++i) {
          if (cl.diameter > deltas[i]) counts[i] += 1.0;
        }
      }
      if (c.raster && r == 0) {
        std::ofstream out(fs::path(c.out) / ("clusters_n" + std::to_string(n) + ".pgm"));
        write_cluster_raster(out, d);
      }
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      counts[i] /= static_cast<double>(std::max<std::size_t>(1, c.samples));
      finiteness << n << deltas[i] << counts[i];
      finiteness.end_row();
    }
    mean_counts.push_back(counts);
    s.require(worst <= 1e-12, "n=" + std::to_string(n) + " reconstruction max error " + format_number(worst));
    s.require(c.mode == DecompositionMode::discrete || refines,
              "n=" + std::to_string(n) + " metric clusters refine nearest-neighbour sign clusters");
    s.require(ordered, "n=" + std::to_string(n) + " clusters ordered by diameter then id");
  }
  for (std::size_t k = 1; k < mean_counts.size(); ++k) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const double prev = mean_counts[k - 1][i], cur = mean_counts[k][i];
      s.require(cur <= 2.0 * prev + 1.0, "clusters above delta=" + format_number(deltas[i]) +
                                             " do not blow up between successive levels (" + format_number(prev) +
                                             " -> " + format_number(cur) + ")");
    }
  }
  s.write("clusters.csv", clusters);
  s.write("finiteness.csv", finiteness);
}

// --- minkowski ------------------------------------------------------------

void run_minkowski(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "cluster_rank", "r", "minkowski", "field_mass", "ratio"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const Replica rep = draw_replica(*gop, c.seed, 0, c.mode);
    const auto f = make_grid_function(gop->domain(), c.f);
    const double h = gop->domain().mesh();
    std::vector<double> radii;
    for (double k : c.r_over_h) {
      if (k * h < 1.0) radii.push_back(k * h);
    }
    const std::size_t top = std::min(c.top, rep.decomposition.size());
    for (std::size_t k = 0; k < top; ++k) {
      const auto& cl = rep.decomposition.clusters[k];
      if (evaluate_measure(cl, rep.field, f) <= 0.0) continue;
      const auto ratios = gauge_ratio(cl, rep.field, radii, f);
      double lo = INFINITY, hi = 0.0;
      for (const auto& g : ratios) {
        table << n << k + 1 << g.r << g.minkowski << g.field_mass << g.ratio;
        table.end_row();
        lo = std::min(lo, g.ratio);
        hi = std::max(hi, g.ratio);
      }
      if (k == 0 && !ratios.empty()) {
        s.note("n=" + std::to_string(n) + " largest-cluster gauge ratio spread " + format_number(hi / lo));
      }
    }
  }
  s.write("minkowski.csv", table);
}

// --- crossing -------------------------------------------------------------

void run_crossing(const ExperimentConfig& c, Session& s) {
  const auto levels = c.levels();
  const ContinuityScan scan = continuity_scan(c.a_grid, c.b_grid, levels, c.samples, c.seed, s.cache());
  CsvTable table({"n", "a", "b", "M", "p_hat", "ci_low", "ci_high", "seed0"});
  for (const auto& row : scan.rows) {
    table << row.n << row.spec.a << row.spec.b << row.estimate.samples << row.estimate.p_hat << row.estimate.ci_low
          << row.estimate.ci_high << std::to_string(row.seed0);
    table.end_row();
  }
  CsvTable shift({"n", "max_shift_difference"});
  for (std::size_t i = 0; i < scan.levels.size(); ++i) {
    shift << scan.levels[i] << scan.max_shift_difference[i];
    shift.end_row();
  }
  s.write("crossing.csv", table);
  s.write("crossing_shift.csv", shift);
  s.require(scan.diagonal_failures == 0, "p(a,a) = 1 on every sample");
  s.require(scan.monotonicity_violations == 0, "crossing event nonincreasing in b on every sample");
  if (scan.levels.size() >= 2) {
    const double first = scan.max_shift_difference.front(), last = scan.max_shift_difference.back();
    const double noise = 3.0 * std::sqrt(0.5 / static_cast<double>(c.samples));
    s.require(last <= 2.0 * first + noise, "b-shift differences do not double from n=" +
                                               std::to_string(levels.front()) + " to n=" +
                                               std::to_string(levels.back()));
  }
}

// --- spin -----------------------------------------------------------------

constexpr std::size_t kExactSpinVertexLimit = 16384;

void run_spin(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "f_name", "M", "discrepancy", "se", "deterministic_value"});
  double previous = INFINITY;
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const auto f = make_grid_function(gop->domain(), c.f);
    const auto mc = spin_discrepancy(*gop, f, std::max<std::size_t>(2, c.samples), c.seed);
    // The closed form needs one Green column per vertex.
    const bool affordable = gop->domain().interior_count() <= kExactSpinVertexLimit;
    const double exact = affordable ? spin_discrepancy_exact(*gop, f) : NAN;
    table << n << to_string(c.f) << mc.samples << mc.mean << mc.standard_error << exact;
    table.end_row();
    if (affordable) {
      s.require(std::abs(mc.mean - exact) <= 3.0 * mc.standard_error,
                "n=" + std::to_string(n) + " spin discrepancy Monte Carlo agrees with closed form");
    } else {
      s.note("n=" + std::to_string(n) + " closed form skipped above " + std::to_string(kExactSpinVertexLimit) +
             " vertices");
    }
    if (!(mc.mean < previous)) s.note("spin discrepancy did not decrease at n=" + std::to_string(n));
    previous = mc.mean;
  }
  CsvTable identity({"rho", "pairs", "empirical", "exact", "se", "z"});
  for (std::size_t i = 0; i < c.rho_list.size(); ++i) {
    const auto r = sign_correlation_mc(c.rho_list[i], c.pairs, c.seed + i);
    identity << r.rho << r.samples << r.empirical << r.exact << r.standard_error << r.z;
    identity.end_row();
    s.require(std::abs(r.z) <= 3.0, "arcsin identity at rho=" + format_number(r.rho));
  }
  s.write("spin.csv", table);
  s.write("sign_identity.csv", identity);
}

// --- stats ----------------------------------------------------------------

void stats_moment(const ExperimentConfig& c, Session& s, bool l2) {
  CsvTable table({"n", "J", "f_name", "q", "M", "lhs", "lhs_se", "rhs", "rhs_se", "difference", "difference_se",
                  "max_abs_rest", "pass"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const auto f = make_grid_function(gop->domain(), c.f);
    const auto r = l2 ? l2_identity_check(*gop, f, c.ranks, c.samples, c.seed)
                      : moment_inequality_check(*gop, f, c.ranks, c.q, c.samples, c.seed);
    table << n << ranks_text(c.ranks) << to_string(c.f) << r.q << r.samples << r.lhs << r.lhs_se << r.rhs
          << r.rhs_se << r.difference << r.difference_se << r.max_abs_rest << (r.pass ? 1 : 0);
    table.end_row();
    s.require(r.pass, std::string(l2 ? "L2 identity" : "moment inequality") + " at n=" + std::to_string(n));
  }
  s.write(l2 ? "stats_l2.csv" : "stats_moment.csv", table);
}

void stats_sign(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "K", "M_used", "M_skipped", "rank", "mean", "max_abs_corr", "diameter_corr", "mass_corr",
                  "threshold", "corrupt"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const auto r = sign_independence_test(*gop, c.top, c.samples, c.seed, c.corrupt);
    for (std::size_t k = 0; k < r.top; ++k) {
      double worst = 0.0;
      for (std::size_t j = 0; j < r.top; ++j) {
        if (j != k) worst = std::isnan(r.correlation[k][j]) ? NAN : std::max(worst, std::abs(r.correlation[k][j]));
      }
      table << n << r.top << r.samples_used << r.samples_skipped << k + 1 << r.mean[k] << worst
            << r.diameter_correlation[k] << r.mass_correlation[k] << r.threshold << (c.corrupt ? 1 : 0);
      table.end_row();
    }
    s.require(r.pass, "sign means and pairwise correlations within 3/sqrt(M) at n=" + std::to_string(n));
    if (!r.rest_pass) s.note("sign versus diameter/mass correlation exceeded 3/sqrt(M) at n=" + std::to_string(n));
  }
  s.write("stats_sign_independence.csv", table);
}

void stats_height_gap(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "mode", "M", "regions", "statistic", "se", "region_mean", "full_region_statistic",
                  "holes", "hole_statistic", "hole_se", "target"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const auto r = height_gap_statistic(*gop, c.mode, c.min_hole_vertices, c.samples, c.seed);
    table << n << to_string(r.mode) << r.samples << r.regions << r.statistic << r.standard_error << r.region_mean
          << r.full_region_statistic << r.holes << r.hole_statistic << r.hole_standard_error << r.target;
    table.end_row();
    s.require(!r.insufficient_regions, "n=" + std::to_string(n) + " has qualifying enclosed regions");
    if (r.insufficient_holes) s.note("n=" + std::to_string(n) + " insufficient holes");
  }
  s.write("stats_height_gap.csv", table);
}

void stats_tail(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "block_level", "max_component_diameter", "tail_norm"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const auto& domain = gop->domain();
    const double empty = tail_norm(*gop, {});
    s.require(empty == 0.0, "tail norm of the empty subdomain is 0");
    double previous = INFINITY;
    const Rectangle box = domain.bounding_box();
    for (int level = 0; level < n; ++level) {
      const auto sub = dyadic_blocks(domain, level);
      if (sub.empty()) break;
      const double value = tail_norm(*gop, sub);
      const double diameter = std::hypot(box.width(), box.height()) / std::ldexp(1.0, level);
      table << n << level << diameter << value;
      table.end_row();
      s.require(value < previous, "n=" + std::to_string(n) + " tail norm strictly decreasing at block level " +
                                      std::to_string(level));
      previous = value;
    }
  }
  s.write("stats_tail.csv", table);
}

void stats_partial_sums(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "N", "median_residual", "median_field_norm"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const double h = gop->domain().mesh();
    const auto p = partial_sum_profile(*gop, c.sobolev_exponent, 4.0 * h, c.samples, c.seed);
    bool monotone = true;
    for (std::size_t i = 0; i < p.counts.size(); ++i) {
      table << n << p.counts[i] << p.median_residual[i] << p.median_field_norm;
      table.end_row();
      if (i > 0 && p.median_residual[i] > p.median_residual[i - 1]) monotone = false;
    }
    s.require(monotone, "n=" + std::to_string(n) + " median partial-sum residual nonincreasing");
    s.require(p.median_resolved_residual < 0.1 * p.median_field_norm,
              "n=" + std::to_string(n) + " residual after clusters of diameter > 4h below 10% of the field norm");
  }
  s.write("stats_partial_sums.csv", table);
}

void stats_sign_covariance(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "v", "w", "rho", "M", "empirical", "exact", "se", "z"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    if (c.probes.size() < 2) throw std::invalid_argument("sign-covariance needs two probes");
    const auto v = gop->domain().nearest_interior(c.probes[0]);
    const auto w = gop->domain().nearest_interior(c.probes[1]);
    if (!v || !w) throw std::invalid_argument("probe outside the domain");
    const auto r = sign_covariance_identity_check(*gop, *v, *w, c.samples, c.seed);
    table << n << static_cast<std::size_t>(*v) << static_cast<std::size_t>(*w) << r.rho << r.samples << r.empirical
          << r.exact << r.standard_error << r.z;
    table.end_row();
    s.require(std::abs(r.z) <= 3.0, "sign covariance identity at n=" + std::to_string(n));
  }
  s.write("stats_sign_covariance.csv", table);
}

void run_stats(const ExperimentConfig& c, Session& s, std::string_view check) {
  std::vector<std::string> checks = c.checks;
  if (!check.empty()) checks = {std::string(check)};
  for (const auto& name : checks) {
    s.log() << "check " << name << '\n';
    if (name == "l2") {
      stats_moment(c, s, true);
    } else if (name == "moment") {
      stats_moment(c, s, false);
    } else if (name == "sign-independence") {
      stats_sign(c, s);
    } else if (name == "height-gap") {
      stats_height_gap(c, s);
    } else if (name == "tail") {
      stats_tail(c, s);
    } else if (name == "partial-sums") {
      stats_partial_sums(c, s);
    } else if (name == "sign-covariance") {
      stats_sign_covariance(c, s);
    } else {
      throw std::invalid_argument("unknown stats check '" + name + "'");
    }
  }
}

// --- markov ---------------------------------------------------------------

void run_markov(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "probe", "x", "y", "used", "skipped", "mean", "se", "z", "mean_residual_sq", "mean_green"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const auto path = horizontal_path(gop->domain(), c.path_y, c.path_end_x);
    std::vector<VertexId> probes;
    for (const Point& p : c.probes) {
      const auto v = gop->domain().nearest_interior(p);
      if (!v) throw std::invalid_argument("probe outside the domain");
      probes.push_back(*v);
    }
    const auto r = markov_check(*gop, path, probes, c.samples, c.seed);
    for (std::size_t i = 0; i < r.probes.size(); ++i) {
      const auto& p = r.probes[i];
      table << n << i + 1 << p.position.x << p.position.y << p.used << p.skipped << p.mean << p.standard_error
            << p.z << p.mean_residual_sq << p.mean_green;
      table.end_row();
    }
    s.require(r.pass, "Markov residual statistic |z| <= 3 at every probe, n=" + std::to_string(n));
  }
  s.write("markov.csv", table);
}

// --- conjecture -----------------------------------------------------------

void run_conjecture(const ExperimentConfig& c, Session& s) {
  CsvTable table({"n", "mode", "M", "regions", "statistic", "se", "region_mean", "full_region_statistic",
                  "holes", "hole_statistic", "hole_se", "target", "metric_over_discrete"});
  for (int n : c.levels()) {
    const auto gop = s.green(n);
    const auto metric = height_gap_statistic(*gop, DecompositionMode::metric, c.min_hole_vertices, c.samples, c.seed);
    const auto discrete =
        height_gap_statistic(*gop, DecompositionMode::discrete, c.min_hole_vertices, c.samples, c.seed);
    const double ratio = discrete.statistic != 0.0 ? metric.statistic / discrete.statistic : NAN;
    for (const auto* r : {&metric, &discrete}) {
      table << n << to_string(r->mode) << r->samples << r->regions << r->statistic << r->standard_error
            << r->region_mean << r->full_region_statistic << r->holes << r->hole_statistic << r->hole_standard_error << r->target << ratio;
      table.end_row();
    }
    s.note("n=" + std::to_string(n) + " metric " + format_number(metric.statistic) + ", discrete " +
           format_number(discrete.statistic) + ", ratio " + format_number(ratio));
  }
  s.write("conjecture.csv", table);
}

void write_manifest(const ExperimentConfig& c, std::string_view subcommand, std::string_view check,
                    const RunSummary& summary, double seconds) {
  std::ofstream out(fs::path(c.out) / "manifest.txt");
  out << "version = " << version() << '\n';
  out << "subcommand = " << subcommand << (check.empty() ? "" : " ") << check << '\n';
  out << "base_seed = " << c.seed << '\n';
  out << "seed_rule = " << kSeedRule << '\n';
  out << "wall_clock_seconds = " << format_number(seconds) << '\n';
  out << "exit_code = " << summary.exit_code << '\n';
  for (const auto& [name, rows] : summary.table_rows) out << "rows." << name << " = " << rows << '\n';
  for (const auto& f : summary.failures) out << "failed = " << f << '\n';
  out << "[config]\n" << c.echo();
}

}  // namespace

RunSummary run(const ExperimentConfig& config, std::string_view subcommand, std::string_view check,
               std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
    log << "unknown subcommand '" << subcommand << "'\n";
    RunSummary bad;
    bad.exit_code = 2;
    return bad;
  }
  if (!check.empty() && subcommand != "stats") {
    log << "a check name is only accepted by the stats subcommand\n";
    RunSummary bad;
    bad.exit_code = 2;
    return bad;
  }
  Session session(config, log);
  if (subcommand == "sample") run_sample(config, session);
  if (subcommand == "decompose") run_decompose(config, session);
  if (subcommand == "minkowski") run_minkowski(config, session);
  if (subcommand == "crossing") run_crossing(config, session);
  if (subcommand == "spin") run_spin(config, session);
  if (subcommand == "stats") run_stats(config, session, check);
  if (subcommand == "markov") run_markov(config, session);
  if (subcommand == "conjecture") run_conjecture(config, session);

  RunSummary summary = std::move(session.summary);
  summary.exit_code = summary.failures.empty() ? 0 : 1;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(config, subcommand, check, summary, seconds);
  log << (summary.exit_code == 0 ? "all hard assertions passed" : "hard assertion failures: ")
      << (summary.exit_code == 0 ? "" : std::to_string(summary.failures.size())) << '\n';
  return summary;
}

}  // namespace gffexc
