#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inside/embedding.hpp"
#include "inside/embedding_set.hpp"

namespace inside {

enum class PairingStrategy { Random, NearestNeighbor };

std::string_view to_string(PairingStrategy s) noexcept;
// Accepts "random", "nearest_neighbor" and "nn".
std::optional<PairingStrategy> parse_strategy(std::string_view token) noexcept;
// Short tag used inside synthetic identity names ("random" / "nn").
std::string_view id_tag(PairingStrategy s) noexcept;

struct Neighbor {
  std::string id;
  double distance;
};

struct NeighborTable {
  std::string owner_id;
  std::vector<Neighbor> ranked_neighbors;  // ascending distance, ties by id
};

// One table per member of the gender group, in the set's insertion order.
std::vector<NeighborTable> build_neighbor_tables(const EmbeddingSet& set, Gender g,
                                                 std::size_t max_rank);

struct PlannedPair {
  std::string id_a;  // id_a < id_b
  std::string id_b;
  double alpha = 0.5;

  friend bool operator==(const PlannedPair&, const PlannedPair&) = default;
};

using GenderTargets = std::map<Gender, std::uint64_t>;

struct PairPlan {
  PairingStrategy strategy = PairingStrategy::Random;
  std::uint64_t seed = 0;
  std::vector<PlannedPair> pairs;
  std::uint64_t target_count = 0;
  std::size_t max_level_reached = 0;  // deepest level over all groups; 0 for random

  friend bool operator==(const PairPlan&, const PairPlan&) = default;
};

enum class SplitPolicy { Proportional, Even };

std::optional<SplitPolicy> parse_split_policy(std::string_view token) noexcept;

// Splits `total` over the genders present in `set`. Proportional uses
// largest remainders over real group sizes; even splits equally. Leftover
// units go to genders in enum order.
GenderTargets split_targets(const EmbeddingSet& set, std::uint64_t total, SplitPolicy policy);

// Fixed-alpha policy; the value is stored on every planned pair.
struct AlphaPolicy {
  double alpha = 0.5;
};

PairPlan plan_pairs_random(const EmbeddingSet& set, const GenderTargets& targets,
                           std::uint64_t seed, AlphaPolicy alpha = {});

/// Layered nearest-neighbour pairing.
///
/// Per gender group, level n admits every pair {i, j} where j is among the
/// n nearest neighbours of i (or vice versa) and which was not admitted at
/// an earlier level. Levels are added whole until the target is reached; the
/// final level is down-sampled uniformly to hit the target exactly. Within a
/// level pairs are emitted in canonical (id_a, id_b) order.
PairPlan plan_pairs_nearest_neighbor(const EmbeddingSet& set, const GenderTargets& targets,
                                     std::uint64_t seed, AlphaPolicy alpha = {});

PairPlan plan_pairs(PairingStrategy strategy, const EmbeddingSet& set,
                    const GenderTargets& targets, std::uint64_t seed, AlphaPolicy alpha = {});

// Interpolates every planned pair with its stored alpha, in plan order.
std::vector<SyntheticIdentity> execute_plan(const EmbeddingSet& set, const PairPlan& plan);

}  // namespace inside
