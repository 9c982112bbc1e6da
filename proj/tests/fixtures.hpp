#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "inside/embedding.hpp"
#include "inside/embedding_set.hpp"
#include "inside/random.hpp"

namespace fixtures {

inline inside::Vector random_unit(std::size_t dim, inside::Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    inside::Vector v(dim);
    for (auto& x : v) x = n(rng);
    double s = 0.0;
    for (double x : v) s += x * x;
    if (s > 1e-20) return inside::normalize(v);
  }
}

inline std::string speaker_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%06zu", i);
  return buf;
}

// `males` then `females` random unit identities.
inline inside::EmbeddingSet random_set(std::size_t males, std::size_t females, std::size_t dim,
                                       std::uint64_t seed) {
  inside::Rng rng(seed);
  inside::EmbeddingSet set(dim);
  for (std::size_t i = 0; i < males + females; ++i) {
    set.add({speaker_id(i), i < males ? inside::Gender::Male : inside::Gender::Female,
             random_unit(dim, rng)});
  }
  return set;
}

inline inside::Vector circle_point(double degrees) {
  const double r = degrees * 3.14159265358979323846 / 180.0;
  return {std::cos(r), std::sin(r)};
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("inside-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.string().c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[65536];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof(buf), f)) > 0;) out.append(buf, n);
  std::fclose(f);
  return out;
}

// One transcript per line with word counts cycling through [lo, hi].
inline std::string transcript_corpus(std::size_t lines, std::size_t lo, std::size_t hi) {
  std::string out;
  for (std::size_t i = 0; i < lines; ++i) {
    const std::size_t words = lo + i % (hi - lo + 1);
    for (std::size_t w = 0; w < words; ++w) {
      out += "w";
      out += std::to_string((i * 31 + w) % 97);
      out += w + 1 == words ? '\n' : ' ';
    }
  }
  return out;
}

}  // namespace fixtures
