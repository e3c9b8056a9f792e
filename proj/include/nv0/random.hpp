#pragma once

#include <cstdint>

namespace nv0 {

// splitmix64 finalizer over (seed, stream, index); no hidden state.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
// (0, 1]
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
// standard normal via Box-Muller on two counter uniforms
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace nv0
