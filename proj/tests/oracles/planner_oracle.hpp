#pragma once

// Layered nearest-neighbour pairing written from the set definitions:
//   P_n = { {i, j} : j is among the n nearest neighbours of i }
//   S  <- S u UniquePairs(P_n \ S) until |S| >= T
// with the last level down-sampled to hit T exactly. Distances use the
// library's dot primitive so ranking agrees to the last bit. The rest is a
// full distance matrix with std::set algebra, independent of the planner.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "inside/embedding.hpp"
#include "inside/embedding_set.hpp"
#include "inside/pair_planner.hpp"
#include "inside/random.hpp"

namespace oracle {

using IdPair = std::pair<std::string, std::string>;

struct OracleGroupResult {
  std::vector<IdPair> pairs;  // in admission order
  std::size_t levels = 0;
};

inline OracleGroupResult nn_plan_group(const inside::EmbeddingSet& set, inside::Gender g,
                                       std::uint64_t target, std::uint64_t seed) {
  std::vector<const inside::SpeakerEmbedding*> members;
  for (std::size_t pos : set.group(g)) members.push_back(&set[pos]);
  std::sort(members.begin(), members.end(), [](auto* a, auto* b) { return a->id < b->id; });
  const std::size_t m = members.size();

  std::vector<std::vector<double>> dist(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      dist[i][j] = 1.0 - inside::dot(members[i]->vector, members[j]->vector);

  // ranked[i] = all other members ordered by (distance, index)
  std::vector<std::vector<std::size_t>> ranked(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) ranked[i].push_back(j);
    std::sort(ranked[i].begin(), ranked[i].end(), [&](std::size_t a, std::size_t b) {
      return dist[i][a] != dist[i][b] ? dist[i][a] < dist[i][b] : a < b;
    });
  }

  auto canonical = [&](std::size_t a, std::size_t b) {
    const auto& x = members[a]->id;
    const auto& y = members[b]->id;
    return x < y ? IdPair{x, y} : IdPair{y, x};
  };

  OracleGroupResult out;
  if (target == 0) return out;
  inside::Rng rng(inside::gender_seed(seed, g));
  std::set<IdPair> selected;
  for (std::size_t n = 1; n < m; ++n) {
    std::set<IdPair> level;  // P_n
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < n; ++k) level.insert(canonical(i, ranked[i][k]));
    std::vector<IdPair> fresh;  // P_n \ S, sorted
    std::set_difference(level.begin(), level.end(), selected.begin(), selected.end(),
                        std::back_inserter(fresh));
    const std::uint64_t need = target - selected.size();
    if (fresh.size() > need) {
      std::vector<IdPair> picked;
      for (auto idx : inside::sample_indices(fresh.size(), need, rng)) picked.push_back(fresh[idx]);
      std::sort(picked.begin(), picked.end());
      fresh = std::move(picked);
    }
    for (auto& p : fresh) {
      selected.insert(p);
      out.pairs.push_back(p);
    }
    if (selected.size() >= target) {
      out.levels = n;
      break;
    }
  }
  return out;
}

}  // namespace oracle
