#pragma once

#include <cstdint>
#include <string_view>

namespace gffexc {

/// Independent random streams used by one replica.
enum class StreamTag : std::uint64_t {
  field = 1,
  openings = 2,
  bridge = 3,
  first_zero = 4,
  synthetic = 5,
};

/// Identifier of the seed derivation rule, echoed into run manifests.
inline constexpr std::string_view kSeedRule = "splitmix64-chain-v1";

/// Stateless seed for (base_seed, replica_index, stream_tag):
///   x = mix(base + golden * (replica + 1)); x = mix(x ^ mix(tag * odd));
/// where mix is the splitmix64 finalizer, a bijection on 64-bit words.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t replica_index, StreamTag tag);

std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace gffexc
