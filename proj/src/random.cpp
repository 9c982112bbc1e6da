#include "inside/random.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "inside/error.hpp"

namespace inside {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept {
  return splitmix64(seed ^ fnv1a64(label));
}

std::uint64_t gender_seed(std::uint64_t seed, Gender g) noexcept {
  return seed ^ fnv1a64(to_string(g));
}

std::vector<std::uint64_t> sample_indices(std::uint64_t n, std::uint64_t k, Rng& rng) {
  if (k > n) {
    throw Error(ErrorKind::InvalidArgument,
                "cannot sample " + std::to_string(k) + " of " + std::to_string(n) + " items");
  }
  std::vector<std::uint64_t> out;
  if (k == 0) return out;
  out.reserve(k);

  if (n <= 4 * k || n <= 1024) {
    // partial Fisher-Yates
    std::vector<std::uint64_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
  }

  // Floyd's algorithm, then shuffle so the order is uniform as well.
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    const std::uint64_t v = seen.insert(t).second ? t : j;
    if (v == j) seen.insert(j);
    out.push_back(v);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace inside
