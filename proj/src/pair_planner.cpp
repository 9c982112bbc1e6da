#include "inside/pair_planner.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "inside/error.hpp"
#include "inside/kernels.hpp"
#include "inside/random.hpp"

namespace inside {

std::string_view to_string(PairingStrategy s) noexcept {
  return s == PairingStrategy::Random ? "random" : "nearest_neighbor";
}

std::optional<PairingStrategy> parse_strategy(std::string_view token) noexcept {
  if (token == "random") return PairingStrategy::Random;
  if (token == "nearest_neighbor" || token == "nn") return PairingStrategy::NearestNeighbor;
  return std::nullopt;
}

std::string_view id_tag(PairingStrategy s) noexcept {
  return s == PairingStrategy::Random ? "random" : "nn";
}

std::optional<SplitPolicy> parse_split_policy(std::string_view token) noexcept {
  if (token == "proportional") return SplitPolicy::Proportional;
  if (token == "even") return SplitPolicy::Even;
  return std::nullopt;
}

namespace {

// Group members ordered by id, so row index order equals id order and the
// kernel's index tie-break is the id tie-break.
struct SortedGroup {
  std::vector<std::size_t> positions;  // into the EmbeddingSet
  RowMatrix matrix;
};

SortedGroup sorted_group(const EmbeddingSet& set, Gender g) {
  SortedGroup out;
  const auto grp = set.group(g);
  out.positions.assign(grp.begin(), grp.end());
  std::sort(out.positions.begin(), out.positions.end(),
            [&](std::size_t a, std::size_t b) { return set[a].id < set[b].id; });
  out.matrix = RowMatrix(out.positions.size(), set.dimension());
  for (std::size_t r = 0; r < out.positions.size(); ++r) {
    const auto& v = set[out.positions[r]].vector;
    std::copy(v.begin(), v.end(), out.matrix.row(r).begin());
  }
  return out;
}

std::uint64_t pair_capacity(std::uint64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

void check_capacity(Gender g, std::uint64_t target, std::uint64_t members) {
  const std::uint64_t cap = pair_capacity(members);
  if (target > cap) {
    throw Error(ErrorKind::TargetExceedsCapacity,
                "gender " + std::string(to_string(g)) + ": target " + std::to_string(target) +
                    " exceeds capacity " + std::to_string(cap) + " (" + std::to_string(members) +
                    " identities)");
  }
}

std::uint64_t target_for(const GenderTargets& targets, Gender g) {
  auto it = targets.find(g);
  return it == targets.end() ? 0 : it->second;
}

PlannedPair make_pair(const EmbeddingSet& set, const SortedGroup& grp, std::uint64_t key,
                      double alpha) {
  const auto a = static_cast<std::uint32_t>(key >> 32);
  const auto b = static_cast<std::uint32_t>(key & 0xffffffffULL);
  return {set[grp.positions[a]].id, set[grp.positions[b]].id, alpha};
}

}  // namespace

std::vector<NeighborTable> build_neighbor_tables(const EmbeddingSet& set, Gender g,
                                                 std::size_t max_rank) {
  const auto members = set.group(g);
  if (members.size() < 2) {
    throw Error(ErrorKind::GroupTooSmall,
                "gender " + std::string(to_string(g)) + " has fewer than 2 identities");
  }
  if (max_rank == 0 || max_rank > members.size() - 1) {
    throw Error(ErrorKind::InvalidArgument, "max_rank must be in [1, group size - 1]");
  }
  const SortedGroup grp = sorted_group(set, g);
  const NeighborLists lists = kernels::rank_neighbors(grp.matrix, max_rank);

  // Map sorted rows back to insertion order.
  std::vector<std::size_t> row_of(set.size());
  for (std::size_t r = 0; r < grp.positions.size(); ++r) row_of[grp.positions[r]] = r;

  std::vector<NeighborTable> out;
  out.reserve(members.size());
  for (std::size_t pos : members) {
    NeighborTable t;
    t.owner_id = set[pos].id;
    for (const auto& nb : lists[row_of[pos]]) {
      t.ranked_neighbors.push_back({set[grp.positions[nb.index]].id, nb.distance});
    }
    out.push_back(std::move(t));
  }
  return out;
}

GenderTargets split_targets(const EmbeddingSet& set, std::uint64_t total, SplitPolicy policy) {
  std::vector<Gender> present;
  for (Gender g : kGenders)
    if (!set.group(g).empty()) present.push_back(g);
  GenderTargets out;
  if (present.empty()) {
    if (total > 0) throw Error(ErrorKind::InvalidArgument, "cannot split targets over an empty set");
    return out;
  }

  std::uint64_t assigned = 0;
  std::vector<std::pair<std::uint64_t, Gender>> remainders;  // numerator of the fractional part
  for (Gender g : present) {
    std::uint64_t share = 0;
    std::uint64_t rem = 0;
    if (policy == SplitPolicy::Even) {
      share = total / present.size();
      rem = total % present.size();
    } else {
      const unsigned __int128 num = static_cast<unsigned __int128>(total) * set.group(g).size();
      share = static_cast<std::uint64_t>(num / set.size());
      rem = static_cast<std::uint64_t>(num % set.size());
    }
    out[g] = share;
    assigned += share;
    remainders.emplace_back(rem, g);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[remainders[i % remainders.size()].second];
  return out;
}

PairPlan plan_pairs_random(const EmbeddingSet& set, const GenderTargets& targets,
                           std::uint64_t seed, AlphaPolicy alpha) {
  const InterpolationCoefficient coeff(alpha.alpha);
  PairPlan plan;
  plan.strategy = PairingStrategy::Random;
  plan.seed = seed;

  for (Gender g : kGenders) {
    const std::uint64_t target = target_for(targets, g);
    const std::uint64_t m = set.group(g).size();
    check_capacity(g, target, m);
    plan.target_count += target;
    if (target == 0) continue;

    const SortedGroup grp = sorted_group(set, g);
    // offsets[i] = index of the first pair (i, i+1) in row-major upper-triangle order
    std::vector<std::uint64_t> offsets(m);
    for (std::uint64_t i = 0, acc = 0; i < m; ++i) {
      offsets[i] = acc;
      acc += m - 1 - i;
    }
    Rng rng(gender_seed(seed, g));
    for (std::uint64_t p : sample_indices(pair_capacity(m), target, rng)) {
      const auto it = std::upper_bound(offsets.begin(), offsets.end(), p);
      const auto i = static_cast<std::uint64_t>(it - offsets.begin()) - 1;
      const std::uint64_t j = i + 1 + (p - offsets[i]);
      plan.pairs.push_back(make_pair(set, grp, pair_key(static_cast<std::uint32_t>(i),
                                                        static_cast<std::uint32_t>(j)),
                                     coeff.value()));
    }
  }
  return plan;
}

PairPlan plan_pairs_nearest_neighbor(const EmbeddingSet& set, const GenderTargets& targets,
                                     std::uint64_t seed, AlphaPolicy alpha) {
  const InterpolationCoefficient coeff(alpha.alpha);
  PairPlan plan;
  plan.strategy = PairingStrategy::NearestNeighbor;
  plan.seed = seed;

  for (Gender g : kGenders) {
    const std::uint64_t target = target_for(targets, g);
    const std::uint64_t m = set.group(g).size();
    plan.target_count += target;
    if (target == 0) continue;
    if (m < 2) {
      throw Error(ErrorKind::GroupTooSmall,
                  "gender " + std::string(to_string(g)) + " has fewer than 2 identities");
    }
    check_capacity(g, target, m);

    const SortedGroup grp = sorted_group(set, g);
    Rng rng(gender_seed(seed, g));

    // Level n adds at most m pairs, so ceil(target / m) levels are needed.
    const std::uint64_t min_levels = (target + m - 1) / m;
    std::size_t rank_cap = 0;
    std::size_t next_cap = std::min<std::size_t>(std::bit_ceil(min_levels), m - 1);
    NeighborLists lists;

    std::unordered_set<std::uint64_t> selected;
    selected.reserve(target * 2);
    std::vector<std::uint64_t> fresh;

    for (std::size_t level = 1; level <= m - 1; ++level) {
      if (level > rank_cap) {
        rank_cap = std::max(next_cap, level);
        next_cap = std::min<std::size_t>(rank_cap * 2, m - 1);
        lists = kernels::rank_neighbors(grp.matrix, rank_cap);
      }

      fresh.clear();
      for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t key = pair_key(static_cast<std::uint32_t>(i), lists[i][level - 1].index);
        if (!selected.contains(key)) fresh.push_back(key);
      }
      std::sort(fresh.begin(), fresh.end());
      fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());

      const std::uint64_t need = target - selected.size();
      if (fresh.size() > need) {
        std::vector<std::uint64_t> picked;
        for (std::uint64_t idx : sample_indices(fresh.size(), need, rng)) picked.push_back(fresh[idx]);
        std::sort(picked.begin(), picked.end());
        fresh.swap(picked);
      }
      for (std::uint64_t key : fresh) {
        selected.insert(key);
        plan.pairs.push_back(make_pair(set, grp, key, coeff.value()));
      }
      if (selected.size() == target) {
        plan.max_level_reached = std::max(plan.max_level_reached, level);
        break;
      }
    }
  }
  return plan;
}

PairPlan plan_pairs(PairingStrategy strategy, const EmbeddingSet& set,
                    const GenderTargets& targets, std::uint64_t seed, AlphaPolicy alpha) {
  return strategy == PairingStrategy::Random
             ? plan_pairs_random(set, targets, seed, alpha)
             : plan_pairs_nearest_neighbor(set, targets, seed, alpha);
}

std::vector<SyntheticIdentity> execute_plan(const EmbeddingSet& set, const PairPlan& plan) {
  SyntheticIdNamer namer(std::string(id_tag(plan.strategy)));
  std::vector<SyntheticIdentity> out;
  out.reserve(plan.pairs.size());
  for (const auto& p : plan.pairs) {
    out.push_back(interpolate_identity(set.at(p.id_a), set.at(p.id_b),
                                       InterpolationCoefficient(p.alpha), namer));
  }
  return out;
}

}  // namespace inside
