#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gffexc/excursions.hpp"
#include "gffexc/lattice.hpp"
#include "gffexc/metric.hpp"
#include "gffexc/seeds.hpp"

namespace gffexc {

/// One independent draw: field, edge openings (metric mode only) and the
/// resulting decomposition.
struct Replica {
  Field field;
  std::vector<EdgeState> openings;
  Decomposition decomposition;
};

/// Field from stream (seed, index, field), openings from (seed, index, openings).
Replica draw_replica(const GreenOperator& gop, std::uint64_t base_seed, std::uint64_t index,
                     DecompositionMode mode = DecompositionMode::metric);

/// Runs fn(0..count-1), on worker threads when more than one core is present.
/// Callers write into per-index slots, so results never depend on scheduling.
void for_each_replica(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Green operators keyed by (domain, level); factorizations are reused.
class GreenCache {
 public:
  std::shared_ptr<const GreenOperator> get(const DomainSpec& shape, int level);

 private:
  std::mutex mutex_;
  std::map<std::pair<std::string, int>, std::shared_ptr<const GreenOperator>> cache_;
};

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Sample mean and standard error of the mean.
MeanEstimate mean_and_error(std::span<const double> values);

}  // namespace gffexc
