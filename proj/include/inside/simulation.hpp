#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "inside/diagnostics.hpp"
#include "inside/embedding.hpp"
#include "inside/embedding_set.hpp"
#include "inside/pair_planner.hpp"
#include "inside/random.hpp"

namespace inside {

struct ClusterSpec {
  std::optional<Vector> center;  // nullopt: drawn uniformly on the sphere
  double kappa = 0.0;            // 0 means uniform on the sphere
  std::size_t members = 1;
  Gender gender = Gender::Male;
};

struct PopulationSpec {
  std::size_t dimension = 2;
  std::vector<ClusterSpec> clusters;
  double utterance_kappa = 100.0;  // scatter of real utterances around their identity
  std::optional<double> synthetic_utterance_kappa;  // defaults to utterance_kappa
  std::size_t utterances_per_identity = 10;
  std::size_t probe_count = 500;
  std::uint64_t seed = 0;
};

// Throws InvalidSpec. Explicit centers are normalized in place.
void validate(PopulationSpec& spec);

/// Declarative text config:
///
///   dimension = 16
///   utterance_kappa = 200
///   [cluster]
///   gender = male
///   kappa = 100
///   members = 75
///   center = random        # or a comma-separated vector
///
/// Top-level keys: dimension, utterance_kappa, synthetic_utterance_kappa,
/// utterances_per_identity, probe_count, seed. '#' starts a comment.
PopulationSpec parse_population_spec(std::istream& in);
PopulationSpec read_population_spec_file(const std::filesystem::path& path);

Vector sample_uniform_sphere(std::size_t dimension, Rng& rng);

// von Mises-Fisher draw around unit `mean` via Wood's rejection sampler.
Vector sample_vmf(std::span<const double> mean, double kappa, Rng& rng);

struct Population {
  EmbeddingSet identities;    // true identity directions
  UtteranceGroups utterances;  // per-identity utterance vectors
};

Population sample_population(const PopulationSpec& spec);

// `count` vMF utterances around each identity, keyed by identity id.
UtteranceGroups sample_utterances(std::span<const SyntheticIdentity> identities, double kappa,
                                  std::size_t count, std::uint64_t seed);

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::size_t synthetic_count = 0;  // per strategy
  double energy_nn = 0.0;
  double energy_random = 0.0;
  double coverage_before = 0.0;
  double coverage_after_nn = 0.0;
  double coverage_after_random = 0.0;
  double intra_real_mean = 0.0;
  double intra_synthetic_mean = 0.0;
  bool histograms_conserved = true;
};

struct ExperimentReport {
  std::vector<SeedOutcome> runs;
  double energy_win_rate = 0.0;    // share of seeds with energy_nn <= energy_random
  double coverage_win_rate = 0.0;  // share of seeds with coverage_after_nn <= coverage_after_random
  double intra_gap_rate = 0.0;     // share of seeds with intra_synthetic_mean > intra_real_mean
  bool histograms_conserved = true;
};

/// For every seed: samples a population, plans nearest-neighbour and random
/// pairs of equal size, interpolates both, and scores them (energy distance
/// to the real identities, probe coverage, intra-class similarity of
/// simulated utterances around the nearest-neighbour identities). An empty
/// `targets` map means one synthetic identity per real identity per gender.
ExperimentReport run_experiment(const PopulationSpec& spec, const GenderTargets& targets,
                                std::span<const std::uint64_t> seeds);

void write_report(std::ostream& out, const ExperimentReport& report);

}  // namespace inside
