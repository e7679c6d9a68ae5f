#include "gffexc/replica.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace gffexc {

Replica draw_replica(const GreenOperator& gop, std::uint64_t base_seed, std::uint64_t index,
                     DecompositionMode mode) {
  Rng field_rng(derive_seed(base_seed, index, StreamTag::field));
  Field field = gop.sample(field_rng);
  if (mode == DecompositionMode::discrete) {
    Decomposition decomposition = decompose_discrete(field);
    return Replica{std::move(field), {}, std::move(decomposition)};
  }
  Rng edge_rng(derive_seed(base_seed, index, StreamTag::openings));
  std::vector<EdgeState> openings = sample_openings(field, edge_rng);
  Decomposition decomposition = decompose(field, openings);
  return Replica{std::move(field), std::move(openings), std::move(decomposition)};
}

void for_each_replica(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::shared_ptr<const GreenOperator> GreenCache::get(const DomainSpec& shape, int level) {
  const auto key = std::make_pair(shape.to_string(), level);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto gop = std::make_shared<const GreenOperator>(build_domain(shape, level));
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(gop)).first->second;
}

MeanEstimate mean_and_error(std::span<const double> values) {
  MeanEstimate out;
  out.samples = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double x : values) sum += x;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double x : values) ss += (x - out.mean) * (x - out.mean);
    const double n = static_cast<double>(values.size());
    out.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace gffexc
