#include "gffexc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gffexc/seeds.hpp"
#include "gffexc/sobolev.hpp"
#include "gffexc/sparse_cholesky.hpp"

namespace gffexc {

RankSet RankSet::first(std::size_t k) {
  RankSet r;
  for (std::size_t i = 1; i <= k; ++i) r.ranks.push_back(i);
  return r;
}

bool RankSet::contains(std::size_t rank) const {
  return all || std::find(ranks.begin(), ranks.end(), rank) != ranks.end();
}

// ---------------------------------------------------------------------------
// Moment relations

MomentTerms moment_terms(const Decomposition& decomposition, const Field& field, std::span<const double> f,
                         const RankSet& ranks, std::size_t q) {
  const double h2 = field.domain().mesh() * field.domain().mesh();
  double x = 0.0;
  for (std::size_t v = 0; v < field.size(); ++v) x += f[v] * field[static_cast<VertexId>(v)];
  x *= h2;
  const double power = 2.0 * static_cast<double>(q);
  MomentTerms t;
  t.lhs = std::pow(x, power);
  double signed_sum = 0.0;
  for (std::size_t k = 0; k < decomposition.size(); ++k) {
    if (!ranks.contains(k + 1)) continue;
    const ExcursionCluster& c = decomposition.clusters[k];
    const double y = evaluate_measure(c, field, f);
    t.clusters += std::pow(y, power);
    signed_sum += c.sign * y;
  }
  t.rest = x - signed_sum;
  return t;
}

namespace {

OrthogonalityReport moment_report(const GreenOperator& gop, std::span<const double> f, const RankSet& ranks,
                                  std::size_t q, std::size_t samples, std::uint64_t base_seed) {
  if (f.size() != gop.domain().interior_count()) throw std::invalid_argument("test function size mismatch");
  std::vector<double> lhs(samples), rhs(samples), diff(samples), rest(samples);
  for_each_replica(samples, [&](std::size_t r) {
    const Replica rep = draw_replica(gop, base_seed, r);
    const MomentTerms t = moment_terms(rep.decomposition, rep.field, f, ranks, q);
    lhs[r] = t.lhs;
    rhs[r] = t.clusters + std::pow(t.rest, 2.0 * static_cast<double>(q));
    diff[r] = lhs[r] - rhs[r];
    rest[r] = std::abs(t.rest);
  });
  OrthogonalityReport out;
  out.q = q;
  out.samples = samples;
  const auto l = mean_and_error(lhs);
  const auto rr = mean_and_error(rhs);
  const auto d = mean_and_error(diff);
  out.lhs = l.mean;
  out.lhs_se = l.standard_error;
  out.rhs = rr.mean;
  out.rhs_se = rr.standard_error;
  out.difference = d.mean;
  out.difference_se = d.standard_error;
  out.max_abs_rest = samples ? *std::max_element(rest.begin(), rest.end()) : 0.0;
  return out;
}

}  // namespace

OrthogonalityReport l2_identity_check(const GreenOperator& gop, std::span<const double> f, const RankSet& ranks,
                                      std::size_t samples, std::uint64_t base_seed) {
  if (samples < 100) throw std::invalid_argument("l2_identity_check requires at least 100 samples");
  OrthogonalityReport r = moment_report(gop, f, ranks, 1, samples, base_seed);
  r.pass = std::abs(r.difference) <= 3.0 * r.difference_se + 1e-12;
  if (ranks.all) r.pass = r.pass && r.max_abs_rest <= 1e-10;
  return r;
}

OrthogonalityReport moment_inequality_check(const GreenOperator& gop, std::span<const double> f,
                                            const RankSet& ranks, std::size_t q, std::size_t samples,
                                            std::uint64_t base_seed) {
  if (q < 1) throw std::invalid_argument("moment order q must be at least 1");
  if (samples < 2) throw std::invalid_argument("moment_inequality_check requires at least 2 samples");
  OrthogonalityReport r = moment_report(gop, f, ranks, q, samples, base_seed);
  r.pass = r.lhs >= r.rhs - 3.0 * r.difference_se - 1e-12;
  return r;
}

// ---------------------------------------------------------------------------
// Sign independence

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

SignTestReport sign_independence_test(const GreenOperator& gop, std::size_t top, std::size_t samples,
                                      std::uint64_t base_seed, bool corrupt) {
  if (top < 2) throw std::invalid_argument("sign test requires K >= 2");
  struct Row {
    bool used = false;
    std::vector<double> sign, diameter, mass;
  };
  std::vector<Row> rows(samples);
  for_each_replica(samples, [&](std::size_t r) {
    const Replica rep = draw_replica(gop, base_seed, r);
    const auto& clusters = rep.decomposition.clusters;
    if (clusters.size() < top) return;
    Row& row = rows[r];
    row.used = true;
    for (std::size_t k = 0; k < top; ++k) {
      row.sign.push_back(clusters[k].sign);
      row.diameter.push_back(clusters[k].diameter);
      row.mass.push_back(clusters[k].mass);
    }
    if (corrupt) row.sign[1] = row.sign[0];
  });

  SignTestReport out;
  out.top = top;
  std::vector<std::vector<double>> sign(top), diameter(top), mass(top);
  for (const Row& row : rows) {
    if (!row.used) {
      ++out.samples_skipped;
      continue;
    }
    ++out.samples_used;
    for (std::size_t k = 0; k < top; ++k) {
      sign[k].push_back(row.sign[k]);
      diameter[k].push_back(row.diameter[k]);
      mass[k].push_back(row.mass[k]);
    }
  }
  const double used = static_cast<double>(out.samples_used);
  out.threshold = out.samples_used ? 3.0 / std::sqrt(used) : 0.0;
  out.means_pass = out.samples_used > 0;
  out.pairwise_pass = out.samples_used > 0;
  out.rest_pass = out.samples_used > 0;
  // NaN correlations (a constant series) fail every comparison below.
  auto within = [&](double v) { return std::abs(v) <= out.threshold; };
  out.correlation.assign(top, std::vector<double>(top, 1.0));
  for (std::size_t k = 0; k < top; ++k) {
    const double m = out.samples_used ? std::accumulate(sign[k].begin(), sign[k].end(), 0.0) / used : 0.0;
    out.mean.push_back(m);
    out.means_pass = out.means_pass && within(m);
    for (std::size_t j = 0; j < k; ++j) {
      const double c = pearson(sign[k], sign[j]);
      out.correlation[k][j] = out.correlation[j][k] = c;
      out.pairwise_pass = out.pairwise_pass && within(c);
    }
    out.diameter_correlation.push_back(pearson(sign[k], diameter[k]));
    out.mass_correlation.push_back(pearson(sign[k], mass[k]));
    out.rest_pass = out.rest_pass && within(out.diameter_correlation.back()) && within(out.mass_correlation.back());
  }
  out.pass = out.means_pass && out.pairwise_pass;
  return out;
}

// ---------------------------------------------------------------------------
// Height gap

std::vector<std::int32_t> outermost_owner(const Decomposition& decomposition) {
  const LatticeDomain& domain = *decomposition.domain;
  const std::size_t n_vertices = domain.interior_count();
  const std::size_t n_clusters = decomposition.size();

  // Nodes: clusters, then one node per vertex outside every cluster, then the
  // boundary as the root.
  std::vector<std::uint32_t> node(n_vertices);
  std::size_t next = n_clusters;
  for (std::size_t v = 0; v < n_vertices; ++v) {
    const auto c = decomposition.cluster_of[v];
    node[v] = c >= 0 ? static_cast<std::uint32_t>(c) : static_cast<std::uint32_t>(next++);
  }
  const std::uint32_t root = static_cast<std::uint32_t>(next);
  const std::size_t n_nodes = next + 1;

  std::vector<std::pair<std::uint32_t, std::uint32_t>> links;
  for (const Edge& e : domain.edges()) {
    const std::uint32_t a = node[e.from];
    const std::uint32_t b = e.to_boundary ? root : node[e.to];
    if (a == b) continue;
    links.emplace_back(a, b);
    links.emplace_back(b, a);
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  std::vector<std::uint32_t> offset(n_nodes + 1, 0);
  for (const auto& l : links) ++offset[l.first + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());

  constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> disc(n_nodes, none), low(n_nodes, 0), parent(n_nodes, none), cursor(n_nodes, 0);
  std::vector<std::uint32_t> preorder;
  preorder.reserve(n_nodes);
  std::vector<std::uint32_t> stack{root};
  std::uint32_t timer = 0;
  disc[root] = low[root] = timer++;
  preorder.push_back(root);
  for (std::size_t i = 0; i < n_nodes; ++i) cursor[i] = offset[i];
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    if (cursor[v] < offset[v + 1]) {
      const std::uint32_t w = links[cursor[v]++].second;
      if (w == parent[v]) continue;
      if (disc[w] == none) {
        parent[w] = v;
        disc[w] = low[w] = timer++;
        preorder.push_back(w);
        stack.push_back(w);
      } else {
        low[v] = std::min(low[v], disc[w]);
      }
    } else {
      stack.pop_back();
      if (parent[v] != none) low[parent[v]] = std::min(low[parent[v]], low[v]);
    }
  }

  // A node is enclosed by an ancestor u iff the child of u on the tree path
  // has low >= disc[u]. The outermost encloser is the topmost such u.
  std::vector<std::uint32_t> owner(n_nodes, none);
  for (const std::uint32_t c : preorder) {
    if (c == root) continue;
    const std::uint32_t p = parent[c];
    if (p == root) {
      owner[c] = c;
    } else if (low[c] >= disc[p]) {
      owner[c] = owner[p] == p ? p : owner[p];
    } else {
      owner[c] = owner[p] == p ? c : owner[p];
    }
  }

  std::vector<std::int32_t> out(n_vertices, -1);
  for (std::size_t v = 0; v < n_vertices; ++v) {
    const std::uint32_t o = owner[node[v]];
    if (o < n_clusters) out[v] = static_cast<std::int32_t>(o);
  }
  return out;
}

HeightGapSample height_gap_sample(const Decomposition& decomposition, const Field& field,
                                  std::size_t min_vertices) {
  const LatticeDomain& domain = *decomposition.domain;
  const std::size_t n = domain.interior_count();
  const auto owner = outermost_owner(decomposition);
  const std::size_t n_clusters = decomposition.size();

  std::vector<double> sum(n_clusters, 0.0), inner_sum(n_clusters, 0.0);
  std::vector<std::size_t> count(n_clusters, 0), inner_count(n_clusters, 0);
  std::vector<bool> touches(n_clusters, false);
  for (std::size_t v = 0; v < n; ++v) {
    const auto o = owner[v];
    if (o < 0) continue;
    const double phi = field[static_cast<VertexId>(v)];
    sum[o] += phi;
    ++count[o];
    bool inner = true;
    for (const Neighbor& nb : domain.neighbors(static_cast<VertexId>(v))) {
      if (nb.boundary || owner[nb.index] != o) inner = false;
    }
    if (inner) {
      inner_sum[o] += phi;
      ++inner_count[o];
    }
    if (decomposition.cluster_of[v] == o && domain.touches_boundary(static_cast<VertexId>(v))) touches[o] = true;
  }

  HeightGapSample out;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    if (count[c] == 0 || touches[c] || count[c] < min_vertices) continue;
    const int sign = decomposition.clusters[c].sign;
    out.filled_sum += sign * sum[c];
    out.filled_count += count[c];
    if (inner_count[c] == 0) continue;
    out.interior_sum += sign * inner_sum[c];
    out.interior_count += inner_count[c];
    out.filled_means.push_back(sign * inner_sum[c] / static_cast<double>(inner_count[c]));
  }

  // Holes: components of {owner == c} minus C itself.
  std::vector<bool> seen(n, false);
  std::vector<VertexId> queue;
  for (std::size_t start = 0; start < n; ++start) {
    const auto o = owner[start];
    if (seen[start] || o < 0 || decomposition.cluster_of[start] == o) continue;
    queue.assign(1, static_cast<VertexId>(start));
    seen[start] = true;
    double hole_sum = 0.0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      hole_sum += field[v];
      for (const Neighbor& nb : domain.neighbors(v)) {
        if (nb.boundary || seen[nb.index]) continue;
        if (owner[nb.index] != o || decomposition.cluster_of[nb.index] == o) continue;
        seen[nb.index] = true;
        queue.push_back(nb.index);
      }
    }
    if (queue.size() < min_vertices) continue;
    out.hole_means.push_back(-decomposition.clusters[o].sign * hole_sum / static_cast<double>(queue.size()));
    out.hole_sizes.push_back(queue.size());
  }
  return out;
}

namespace {

// Ratio estimator sum(S) / sum(W) over samples with its delta-method s.e.
std::pair<double, double> ratio_estimate(std::span<const double> s, std::span<const double> w) {
  const double total_w = std::accumulate(w.begin(), w.end(), 0.0);
  if (total_w <= 0.0) return {0.0, 0.0};
  const double r = std::accumulate(s.begin(), s.end(), 0.0) / total_w;
  const double m = static_cast<double>(s.size());
  if (m < 2) return {r, 0.0};
  const double mean_w = total_w / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) ss += (s[i] - r * w[i]) * (s[i] - r * w[i]);
  return {r, std::sqrt(ss / (m * (m - 1.0))) / mean_w};
}

}  // namespace

HeightGapReport height_gap_statistic(const GreenOperator& gop, DecompositionMode mode, std::size_t min_vertices,
                                     std::size_t samples, std::uint64_t base_seed) {
  if (min_vertices < 4) throw std::invalid_argument("min_hole_vertices must be at least 4");
  std::vector<HeightGapSample> per(samples);
  for_each_replica(samples, [&](std::size_t r) {
    const Replica rep = draw_replica(gop, base_seed, r, mode);
    per[r] = height_gap_sample(rep.decomposition, rep.field, min_vertices);
  });

  HeightGapReport out;
  out.mode = mode;
  out.samples = samples;
  out.target = mode == DecompositionMode::metric ? HeightGapConstants::two_lambda : HeightGapConstants::lambda;
  std::vector<double> is(samples), iw(samples), fs(samples), fw(samples), hs(samples), hw(samples);
  double region_total = 0.0;
  for (std::size_t r = 0; r < samples; ++r) {
    is[r] = per[r].interior_sum;
    iw[r] = static_cast<double>(per[r].interior_count);
    fs[r] = per[r].filled_sum;
    fw[r] = static_cast<double>(per[r].filled_count);
    out.regions += per[r].filled_means.size();
    for (double m : per[r].filled_means) region_total += m;
    hs[r] = std::accumulate(per[r].hole_means.begin(), per[r].hole_means.end(), 0.0);
    hw[r] = static_cast<double>(per[r].hole_means.size());
    out.holes += per[r].hole_means.size();
  }
  std::tie(out.statistic, out.standard_error) = ratio_estimate(is, iw);
  out.full_region_statistic = ratio_estimate(fs, fw).first;
  std::tie(out.hole_statistic, out.hole_standard_error) = ratio_estimate(hs, hw);
  out.region_mean = out.regions ? region_total / static_cast<double>(out.regions) : 0.0;
  out.insufficient_regions = out.regions == 0;
  out.insufficient_holes = out.holes == 0;
  return out;
}

// ---------------------------------------------------------------------------
// Markov property along a path

ComplementGreen complement_green(const Field& field, std::span<const VertexId> gamma,
                                 std::span<const VertexId> probes, Rng& rng) {
  const LatticeDomain& domain = field.domain();
  const std::size_t n = domain.interior_count();
  std::vector<bool> in_gamma(n, false);
  for (VertexId v : gamma) in_gamma[v] = true;

  ComplementGreen out;
  out.index.assign(n, -1);
  std::int32_t m = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!in_gamma[v]) out.index[v] = m++;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m) * 5);
  for (std::size_t v = 0; v < n; ++v) {
    const auto row = out.index[v];
    if (row < 0) continue;
    double diag = 0.0;
    for (const Neighbor& nb : domain.neighbors(static_cast<VertexId>(v))) {
      if (nb.boundary) {
        diag += 1.0;
      } else if (in_gamma[nb.index]) {
        const double tau = sample_first_zero(field[nb.index], field[static_cast<VertexId>(v)], rng);
        diag += 1.0 / (1.0 - tau);
      } else {
        diag += 1.0;
        triplets.emplace_back(row, out.index[nb.index], -1.0);
      }
    }
    triplets.emplace_back(row, row, diag);
  }
  out.diagonal.assign(probes.size(), std::numeric_limits<double>::quiet_NaN());
  if (m == 0) return out;
  SparseCholesky::Matrix a(m, m);
  a.setFromTriplets(triplets.begin(), triplets.end());
  const SparseCholesky chol(std::move(a));
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto row = out.index[probes[i]];
    if (row < 0) continue;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[row] = 1.0;
    out.diagonal[i] = chol.solve(e)[row];
  }
  return out;
}

MarkovReport markov_check(const GreenOperator& gop, std::span<const VertexId> path, std::span<const VertexId> probes,
                          std::size_t samples, std::uint64_t base_seed) {
  if (samples < 2) throw std::invalid_argument("markov_check requires at least 2 samples");
  const LatticeDomain& domain = gop.domain();
  for (VertexId p : probes) {
    if (p >= domain.interior_count()) throw std::out_of_range("probe is not an interior vertex");
    if (std::find(path.begin(), path.end(), p) != path.end()) throw std::invalid_argument("probe lies on the path");
  }
  const std::size_t k = probes.size();
  // Per sample and probe: residual^2, G_complement, or NaN when skipped.
  std::vector<double> residual_sq(samples * k), green(samples * k);
  for_each_replica(samples, [&](std::size_t r) {
    const Replica rep = draw_replica(gop, base_seed, r);
    const PathHits hits = clusters_hitting_path(rep.decomposition, path);
    Rng rng(derive_seed(base_seed, r, StreamTag::first_zero));
    const ComplementGreen cg = complement_green(rep.field, hits.vertices, probes, rng);
    for (std::size_t i = 0; i < k; ++i) {
      const VertexId p = probes[i];
      if (cg.index[p] < 0) {
        residual_sq[r * k + i] = green[r * k + i] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      // Hit clusters vanish off gamma^exc, so the residual is phi itself.
      double residual = rep.field[p];
      for (std::size_t c : hits.clusters) {
        if (rep.decomposition.cluster_of[p] == static_cast<std::int32_t>(c)) residual = 0.0;
      }
      residual_sq[r * k + i] = residual * residual;
      green[r * k + i] = cg.diagonal[i];
    }
  });

  MarkovReport out;
  out.samples = samples;
  out.pass = true;
  for (std::size_t i = 0; i < k; ++i) {
    ProbeResult pr;
    pr.vertex = probes[i];
    pr.position = domain.position(probes[i]);
    std::vector<double> d;
    double rs = 0.0, gs = 0.0;
    for (std::size_t r = 0; r < samples; ++r) {
      const double a = residual_sq[r * k + i];
      if (std::isnan(a)) {
        ++pr.skipped;
        continue;
      }
      d.push_back(a - green[r * k + i]);
      rs += a;
      gs += green[r * k + i];
    }
    pr.used = d.size();
    const auto est = mean_and_error(d);
    pr.mean = est.mean;
    pr.standard_error = est.standard_error;
    pr.z = est.standard_error > 0.0 ? est.mean / est.standard_error : 0.0;
    if (pr.used > 0) {
      pr.mean_residual_sq = rs / static_cast<double>(pr.used);
      pr.mean_green = gs / static_cast<double>(pr.used);
    }
    out.pass = out.pass && pr.used >= 2 && std::abs(pr.z) <= 3.0;
    out.probes.push_back(pr);
  }
  return out;
}

std::vector<VertexId> horizontal_path(const LatticeDomain& domain, double y, double x_end) {
  const auto h = domain.mesh();
  const auto j = static_cast<std::int32_t>(std::lround(y / h));
  const auto i_end = static_cast<std::int32_t>(std::lround(x_end / h));
  std::vector<VertexId> path;
  for (std::int32_t i = domain.i_min(); i <= i_end; ++i) {
    const auto v = domain.interior_index({i, j});
    if (!v) {
      if (path.empty()) continue;
      break;
    }
    path.push_back(*v);
  }
  if (path.empty() || !domain.touches_boundary(path.front())) {
    throw std::invalid_argument("disconnected path");
  }
  return path;
}

// ---------------------------------------------------------------------------
// Green-kernel tail

double tail_norm(const GreenOperator& gop, std::span<const VertexId> subdomain) {
  const LatticeDomain& domain = gop.domain();
  const std::size_t n = domain.interior_count();
  std::vector<bool> member(n, false);
  for (VertexId v : subdomain) {
    if (v >= n) throw std::out_of_range("subdomain vertex is not interior");
    member[v] = true;
  }
  std::vector<bool> seen(n, false);
  double total = 0.0;
  for (VertexId start = 0; start < n; ++start) {
    if (!member[start] || seen[start]) continue;
    std::vector<VertexId> comp{start};
    seen[start] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (const Neighbor& nb : domain.neighbors(comp[head])) {
        if (nb.boundary || !member[nb.index] || seen[nb.index]) continue;
        seen[nb.index] = true;
        comp.push_back(nb.index);
      }
    }
    std::sort(comp.begin(), comp.end());
    const auto m = static_cast<Eigen::Index>(comp.size());
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index a = 0; a < m; ++a) {
      triplets.emplace_back(a, a, 4.0);
      for (const Neighbor& nb : domain.neighbors(comp[static_cast<std::size_t>(a)])) {
        if (nb.boundary || !member[nb.index]) continue;
        const auto b = std::lower_bound(comp.begin(), comp.end(), nb.index) - comp.begin();
        triplets.emplace_back(a, b, -1.0);
      }
    }
    SparseCholesky::Matrix lap(m, m);
    lap.setFromTriplets(triplets.begin(), triplets.end());
    const SparseCholesky chol(std::move(lap));
    for (Eigen::Index b = 0; b < m; ++b) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      e[b] = 1.0;
      const Eigen::VectorXd g_sub = chol.solve(e);
      const auto g_full = gop.column(comp[static_cast<std::size_t>(b)]);
      for (Eigen::Index a = 0; a < m; ++a) total += g_full[comp[static_cast<std::size_t>(a)]] * g_sub[a];
    }
  }
  return std::pow(domain.mesh(), 4) * total;
}

// ---------------------------------------------------------------------------
// Partial sums

Rectangle embedding_square(const LatticeDomain& domain) {
  const Rectangle box = domain.bounding_box();
  const double side = std::max(box.width(), box.height());
  return {box.x0, box.y0, box.x0 + side, box.y0 + side};
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

PartialSumProfile partial_sum_profile(const GreenOperator& gop, double exponent, double resolved_diameter,
                                      std::size_t samples, std::uint64_t base_seed) {
  SobolevSpec spec;
  spec.exponent = exponent;
  spec.square = embedding_square(gop.domain());
  const SobolevNorm norm(gop.domain(), spec);

  // First pass fixes the N grid; replicas are redrawn rather than stored.
  std::vector<std::size_t> sizes(samples);
  for_each_replica(samples, [&](std::size_t r) { sizes[r] = draw_replica(gop, base_seed, r).decomposition.size(); });
  const std::size_t most = samples ? *std::max_element(sizes.begin(), sizes.end()) : 0;

  PartialSumProfile out;
  out.samples = samples;
  out.resolved_diameter = resolved_diameter;
  out.counts.push_back(0);
  for (std::size_t c = 1; c < most; c *= 2) out.counts.push_back(c);
  out.counts.push_back(most);

  std::vector<std::vector<double>> residual(out.counts.size(), std::vector<double>(samples));
  std::vector<double> field_norm(samples), resolved(samples);
  for_each_replica(samples, [&](std::size_t r) {
    const Replica rep = draw_replica(gop, base_seed, r);
    field_norm[r] = std::sqrt(norm.squared(rep.field));
    auto residual_norm = [&](std::size_t count) {
      const Field part = partial_sum(rep.decomposition, rep.field, count);
      std::vector<double> diff(rep.field.size());
      for (std::size_t v = 0; v < diff.size(); ++v) {
        diff[v] = rep.field[static_cast<VertexId>(v)] - part[static_cast<VertexId>(v)];
      }
      return std::sqrt(std::max(0.0, norm.squared(diff)));
    };
    for (std::size_t i = 0; i < out.counts.size(); ++i) residual[i][r] = residual_norm(out.counts[i]);
    std::size_t big = 0;
    while (big < rep.decomposition.size() && rep.decomposition.clusters[big].diameter > resolved_diameter) ++big;
    resolved[r] = residual_norm(big);
  });
  for (auto& column : residual) out.median_residual.push_back(median(std::move(column)));
  out.median_field_norm = median(std::move(field_norm));
  out.median_resolved_residual = median(std::move(resolved));
  return out;
}

std::vector<VertexId> dyadic_blocks(const LatticeDomain& domain, int level) {
  const Rectangle box = domain.bounding_box();
  const double cells = std::ldexp(1.0, level);
  auto on_line = [&](double coord, double origin, double extent) {
    const double t = (coord - origin) / extent * cells;
    return std::abs(t - std::round(t)) < 1e-9;
  };
  std::vector<VertexId> out;
  for (VertexId v = 0; v < domain.interior_count(); ++v) {
    const Point p = domain.position(v);
    if (on_line(p.x, box.x0, box.width()) || on_line(p.y, box.y0, box.height())) continue;
    out.push_back(v);
  }
  return out;
}

}  // namespace gffexc
