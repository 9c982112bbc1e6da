#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inside/embedding.hpp"
#include "inside/embedding_set.hpp"
#include "inside/kernels.hpp"

namespace inside {

enum class PointKind { Real, Synthetic };
std::string_view to_string(PointKind k) noexcept;

struct ProjectedPoint {
  std::string id;
  PointKind kind = PointKind::Real;
  double x = 0.0;
  double y = 0.0;
};

struct ProjectionResult {
  Vector axis_x;  // orthonormal pair spanning the projection plane
  Vector axis_y;
  std::vector<ProjectedPoint> points;  // real points first, then synthetic
};

/// Projects real and synthetic identities onto the top two principal axes
/// of the real points' mean-centred covariance. Each axis is signed so its
/// largest-magnitude component is positive. Points are not centred:
/// (x, y) = (v . axis_x, v . axis_y).
///
/// Throws DegenerateCovariance when the real points span fewer than two
/// directions (including any set of fewer than three points).
ProjectionResult project_2d(const EmbeddingSet& real, std::span<const SyntheticIdentity> synthetic);

struct SimilarityHistogram {
  std::vector<double> bin_edges;     // bins + 1 ascending edges over [-1, 1]
  std::vector<std::uint64_t> counts;  // one per bin
  std::uint64_t sample_count = 0;
  double mean = 0.0;                 // mean score, NaN when sample_count == 0
};

using UtteranceGroups = std::map<std::string, std::vector<Vector>>;

inline constexpr std::size_t kDefaultHistogramBins = 50;
inline constexpr std::size_t kDefaultMaxPairsPerIdentity = 200;

/// Cosine similarity between distinct utterances of the same identity.
/// Identities with more than `max_pairs_per_identity` pairs are
/// sub-sampled without replacement; each identity draws from its own
/// stream derived from `seed` and its id. Throws GroupTooSmall listing every
/// identity with fewer than two utterances.
SimilarityHistogram intra_class_similarity(const UtteranceGroups& groups,
                                           std::size_t max_pairs_per_identity, std::uint64_t seed,
                                           std::size_t bins = kDefaultHistogramBins);

struct CoverageReport {
  std::size_t probe_count = 0;
  double mean_before = 0.0;  // nearest real identity
  double mean_after = 0.0;   // nearest real or synthetic identity
};

// Probes are SLERP points between random same-gender real pairs at a
// uniformly drawn alpha. Needs a gender group with at least two members.
RowMatrix sample_probes(const EmbeddingSet& real, std::size_t count, std::uint64_t seed);

CoverageReport coverage_with_probes(const EmbeddingSet& real,
                                    std::span<const SyntheticIdentity> synthetic,
                                    const RowMatrix& probes);

CoverageReport coverage_gain(const EmbeddingSet& real, std::span<const SyntheticIdentity> synthetic,
                             std::size_t probe_count, std::uint64_t seed);

// id \t kind \t x \t y
void write_projection(std::ostream& out, const ProjectionResult& projection);
// bin_lo \t bin_hi \t count
void write_histogram(std::ostream& out, const SimilarityHistogram& histogram);
void write_coverage(std::ostream& out, const CoverageReport& report);

}  // namespace inside
