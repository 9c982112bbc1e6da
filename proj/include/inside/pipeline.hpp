#pragma once

// End-to-end stages behind the `inside-cli` subcommands. Every stage takes
// one seed and derives per-stage sub-seeds with derive_seed(seed, "<stage>"),
// so a stage re-run in isolation reproduces its part of a full run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "inside/diagnostics.hpp"
#include "inside/formats.hpp"
#include "inside/manifest.hpp"
#include "inside/pair_planner.hpp"
#include "inside/simulation.hpp"

namespace inside {

struct PipelineConfig {
  std::filesystem::path embeddings_path;
  std::filesystem::path transcripts_path;
  std::filesystem::path output_dir;
  PairingStrategy strategy = PairingStrategy::NearestNeighbor;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  // Explicit per-gender targets win over total_target. With neither, the
  // total is the number of real identities, split proportionally.
  std::optional<GenderTargets> per_gender_targets;
  std::optional<std::uint64_t> total_target;
  SplitPolicy split = SplitPolicy::Proportional;
  std::size_t utterances_per_identity = 25;
  // `id \t count` table of real speakers; switches to mirrored counts.
  std::optional<std::filesystem::path> mirror_counts_path;
  std::size_t min_words = 100;
  std::size_t max_words = 250;
};

GenderTargets resolve_targets(const PipelineConfig& config, const EmbeddingSet& real);

struct ExpandResult {
  PairPlan plan;
  std::vector<SyntheticIdentity> identities;
  ManifestSummary summary;
  EmittedFiles files;
  std::filesystem::path plan_file;
};

// ingest -> plan -> interpolate -> assign texts -> emit (plus plan.txt).
ExpandResult cmd_expand(const PipelineConfig& config);

struct PlanConfig {
  std::filesystem::path embeddings_path;
  std::filesystem::path output_dir;
  PairingStrategy strategy = PairingStrategy::NearestNeighbor;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  std::optional<GenderTargets> per_gender_targets;
  std::optional<std::uint64_t> total_target;
  SplitPolicy split = SplitPolicy::Proportional;
};

// Writes <output_dir>/plan.txt.
PairPlan cmd_plan(const PlanConfig& config);

// Reads a plan, interpolates, writes embeddings.insd and identities.tsv.
std::vector<SyntheticIdentity> cmd_interpolate(const std::filesystem::path& embeddings_path,
                                               const std::filesystem::path& plan_path,
                                               const std::filesystem::path& output_dir);

struct DiagnoseConfig {
  std::filesystem::path real_path;
  std::optional<std::filesystem::path> synthetic_path;
  // Utterance-level bank; record ids are `<identity>/<utterance>`.
  std::optional<std::filesystem::path> utterances_path;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  std::size_t probe_count = 1000;
  std::size_t bins = kDefaultHistogramBins;
  std::size_t max_pairs_per_identity = kDefaultMaxPairsPerIdentity;
};

struct DiagnoseResult {
  ProjectionResult projection;
  CoverageReport coverage;
  std::optional<SimilarityHistogram> histogram;
};

// Writes projection.tsv, coverage.txt and (with utterances) histogram.tsv.
DiagnoseResult cmd_diagnose(const DiagnoseConfig& config);

// Groups utterance vectors by the id prefix before the last '/'.
UtteranceGroups group_utterances(const EmbeddingBank& bank);

// Writes <output_dir>/report.txt.
ExperimentReport cmd_simulate(const std::filesystem::path& spec_path,
                              std::span<const std::uint64_t> seeds, const GenderTargets& targets,
                              const std::filesystem::path& output_dir);

}  // namespace inside
