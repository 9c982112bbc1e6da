#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inside/embedding.hpp"
#include "inside/embedding_set.hpp"

namespace inside {

struct TranscriptEntry {
  std::string text_id;
  std::size_t word_count = 0;
  std::string text;  // single line, no tabs

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

// Replaces tabs, CR and other ASCII whitespace with single spaces and trims.
std::string sanitize_transcript(std::string_view line);
// Number of ASCII-whitespace separated tokens.
std::size_t count_words(std::string_view text);

/// Reads one transcript per line and keeps those with
/// min_words <= word_count <= max_words. Retained entries get sequential ids
/// `txt-000000`, `txt-000001`, ... Throws EmptyPool if nothing survives.
std::vector<TranscriptEntry> ingest_transcripts(std::istream& in, std::size_t min_words,
                                                std::size_t max_words);

struct ManifestRow {
  std::string identity_id;
  std::size_t vector_index = 0;  // record index in the emitted embedding bank
  std::string text_id;
  std::string text;
  std::string output_path;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

struct SynthesisManifest {
  std::vector<ManifestRow> rows;
  std::map<std::string, std::size_t> per_identity_counts;

  friend bool operator==(const SynthesisManifest&, const SynthesisManifest&) = default;
};

std::string output_path_for(std::string_view identity_id, std::size_t utterance_index);

// Each identity draws `utterances_per_identity` distinct texts; texts may repeat
// across identities. Rows are ordered by identity, then utterance index.
SynthesisManifest assign_texts(std::span<const SyntheticIdentity> identities,
                               std::span<const TranscriptEntry> pool,
                               std::size_t utterances_per_identity, std::uint64_t seed);

// Variable per-identity counts; counts[i] belongs to identities[i].
SynthesisManifest assign_texts(std::span<const SyntheticIdentity> identities,
                               std::span<const TranscriptEntry> pool,
                               std::span<const std::size_t> counts, std::uint64_t seed);

// `id \t count` lines.
std::map<std::string, std::size_t> read_count_table(std::istream& in);

/// Per-identity utterance counts copied from real speakers: the k-th
/// synthetic identity of a gender takes the count of the k-th real speaker
/// of that gender (insertion order, cycling if there are more synthetic
/// identities). Real speakers missing from `table` are an error.
std::vector<std::size_t> mirror_counts(const EmbeddingSet& real,
                                       const std::map<std::string, std::size_t>& table,
                                       std::span<const SyntheticIdentity> identities);

// identity_id \t vector_index \t text_id \t output_path \t text
inline constexpr std::string_view kManifestHeader =
    "identity_id\tvector_index\ttext_id\toutput_path\ttext";

void write_manifest(std::ostream& out, const SynthesisManifest& manifest);
SynthesisManifest read_manifest(std::istream& in);

struct ManifestSummary {
  std::size_t total_identities = 0;
  std::map<Gender, std::size_t> identities_per_gender;
  std::size_t total_rows = 0;
  std::size_t utterances_min = 0;
  double utterances_mean = 0.0;
  std::size_t utterances_max = 0;
};

ManifestSummary summarize(const SynthesisManifest& manifest,
                          std::span<const SyntheticIdentity> identities);

using ReportLines = std::vector<std::pair<std::string, std::string>>;

// `key = value` lines; `extra` is appended verbatim after the counts.
void write_summary(std::ostream& out, const ManifestSummary& summary, const ReportLines& extra = {});

void write_identities(std::ostream& out, std::span<const SyntheticIdentity> identities);

struct EmittedFiles {
  std::filesystem::path bank;        // embeddings.insd
  std::filesystem::path identities;  // identities.tsv
  std::filesystem::path manifest;    // manifest.tsv
  std::filesystem::path summary;     // summary.txt
};

/// Writes the synthetic embedding bank, the identity lineage table, the
/// manifest and the summary into `output_dir` (created if missing).
/// Throws IoFailure naming the failing path.
EmittedFiles emit(const SynthesisManifest& manifest, std::span<const SyntheticIdentity> identities,
                  const std::filesystem::path& output_dir, const ReportLines& extra = {});

}  // namespace inside
