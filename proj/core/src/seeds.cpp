#include "gffexc/seeds.hpp"

namespace gffexc {

std::uint64_t splitmix64_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t replica_index, StreamTag tag) {
  std::uint64_t x = splitmix64_mix(base_seed + 0x9E3779B97F4A7C15ULL * (replica_index + 1));
  x ^= splitmix64_mix(static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL);
  return splitmix64_mix(x);
}

}  // namespace gffexc
