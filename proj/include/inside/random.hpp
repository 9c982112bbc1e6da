#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "inside/embedding.hpp"

namespace inside {

using Rng = std::mt19937_64;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Sub-seed for a named pipeline stage: splitmix64(seed ^ fnv1a64(label)).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;

// Per-gender planner stream: seed ^ fnv1a64(gender label). Adding a group
// never shifts another group's stream.
std::uint64_t gender_seed(std::uint64_t seed, Gender g) noexcept;

// k distinct values from [0, n) in uniformly random order. Requires k <= n.
std::vector<std::uint64_t> sample_indices(std::uint64_t n, std::uint64_t k, Rng& rng);

}  // namespace inside
