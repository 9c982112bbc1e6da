#include "inside/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "inside/error.hpp"
#include "inside/formats.hpp"
#include "inside/random.hpp"

namespace inside {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing '" + path.string() + "'");
}

}  // namespace

std::string sanitize_transcript(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool pending_space = false;
  for (char c : line) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::size_t count_words(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::vector<TranscriptEntry> ingest_transcripts(std::istream& in, std::size_t min_words,
                                                std::size_t max_words) {
  if (min_words < 1 || max_words < min_words) {
    throw Error(ErrorKind::InvalidArgument, "word bounds must satisfy 1 <= min <= max");
  }
  std::vector<TranscriptEntry> pool;
  std::string line;
  while (std::getline(in, line)) {
    std::string text = sanitize_transcript(line);
    const std::size_t words = count_words(text);
    if (words < min_words || words > max_words) continue;
    char id[32];
    std::snprintf(id, sizeof(id), "txt-%06zu", pool.size());
    pool.push_back({id, words, std::move(text)});
  }
  if (pool.empty()) {
    throw Error(ErrorKind::EmptyPool, "no transcript has between " + std::to_string(min_words) +
                                          " and " + std::to_string(max_words) + " words");
  }
  return pool;
}

std::string output_path_for(std::string_view identity_id, std::size_t utterance_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "/%05zu.wav", utterance_index);
  return std::string(identity_id) + buf;
}

SynthesisManifest assign_texts(std::span<const SyntheticIdentity> identities,
                               std::span<const TranscriptEntry> pool,
                               std::span<const std::size_t> counts, std::uint64_t seed) {
  if (counts.size() != identities.size()) {
    throw Error(ErrorKind::InvalidArgument, "one utterance count per identity is required");
  }
  for (std::size_t c : counts) {
    if (c > pool.size()) {
      throw Error(ErrorKind::PoolTooSmall, "transcript pool has " + std::to_string(pool.size()) +
                                               " entries, " + std::to_string(c) +
                                               " distinct texts requested per identity");
    }
  }
  SynthesisManifest m;
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  m.rows.reserve(total);

  Rng rng(seed);
  for (std::size_t i = 0; i < identities.size(); ++i) {
    const auto& who = identities[i];
    const auto picks = sample_indices(pool.size(), counts[i], rng);
    for (std::size_t u = 0; u < picks.size(); ++u) {
      const auto& t = pool[picks[u]];
      m.rows.push_back({who.id, i, t.text_id, t.text, output_path_for(who.id, u)});
    }
    m.per_identity_counts[who.id] = counts[i];
  }
  return m;
}

SynthesisManifest assign_texts(std::span<const SyntheticIdentity> identities,
                               std::span<const TranscriptEntry> pool,
                               std::size_t utterances_per_identity, std::uint64_t seed) {
  if (utterances_per_identity == 0) {
    throw Error(ErrorKind::InvalidArgument, "utterances per identity must be positive");
  }
  const std::vector<std::size_t> counts(identities.size(), utterances_per_identity);
  return assign_texts(identities, pool, counts, seed);
}

std::map<std::string, std::size_t> read_count_table(std::istream& in) {
  std::map<std::string, std::size_t> table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    std::size_t count = 0;
    const char* first = tab == std::string::npos ? nullptr : line.data() + tab + 1;
    const char* last = line.data() + line.size();
    if (!first || std::from_chars(first, last, count).ptr != last) {
      throw Error(ErrorKind::ParseError, "count table line " + std::to_string(lineno) + ": expected id<TAB>count");
    }
    table[line.substr(0, tab)] = count;
  }
  return table;
}

std::vector<std::size_t> mirror_counts(const EmbeddingSet& real,
                                       const std::map<std::string, std::size_t>& table,
                                       std::span<const SyntheticIdentity> identities) {
  std::map<Gender, std::vector<std::size_t>> source;
  for (Gender g : kGenders) {
    for (std::size_t pos : real.group(g)) {
      auto it = table.find(real[pos].id);
      if (it == table.end()) {
        throw Error(ErrorKind::UnknownIdentity, "count table has no entry for '" + real[pos].id + "'");
      }
      source[g].push_back(it->second);
    }
  }
  std::map<Gender, std::size_t> cursor;
  std::vector<std::size_t> out;
  out.reserve(identities.size());
  for (const auto& s : identities) {
    const auto& counts = source[s.gender];
    if (counts.empty()) {
      throw Error(ErrorKind::InvalidArgument,
                  "no real " + std::string(to_string(s.gender)) + " speakers to mirror counts from");
    }
    out.push_back(counts[cursor[s.gender]++ % counts.size()]);
  }
  return out;
}

void write_manifest(std::ostream& out, const SynthesisManifest& manifest) {
  out << kManifestHeader << '\n';
  for (const auto& r : manifest.rows) {
    out << r.identity_id << '\t' << r.vector_index << '\t' << r.text_id << '\t' << r.output_path
        << '\t' << r.text << '\n';
  }
}

SynthesisManifest read_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader) {
    throw Error(ErrorKind::ParseError, "manifest: missing or bad header");
  }
  SynthesisManifest m;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cut[4];
    std::size_t from = 0;
    for (auto& c : cut) {
      c = line.find('\t', from);
      if (c == std::string::npos) {
        throw Error(ErrorKind::ParseError, "manifest line " + std::to_string(lineno) + ": expected 5 fields");
      }
      from = c + 1;
    }
    ManifestRow r;
    r.identity_id = line.substr(0, cut[0]);
    const char* first = line.data() + cut[0] + 1;
    const char* last = line.data() + cut[1];
    if (std::from_chars(first, last, r.vector_index).ptr != last) {
      throw Error(ErrorKind::ParseError, "manifest line " + std::to_string(lineno) + ": bad vector_index");
    }
    r.text_id = line.substr(cut[1] + 1, cut[2] - cut[1] - 1);
    r.output_path = line.substr(cut[2] + 1, cut[3] - cut[2] - 1);
    r.text = line.substr(cut[3] + 1);
    ++m.per_identity_counts[r.identity_id];
    m.rows.push_back(std::move(r));
  }
  return m;
}

ManifestSummary summarize(const SynthesisManifest& manifest,
                          std::span<const SyntheticIdentity> identities) {
  ManifestSummary s;
  s.total_identities = identities.size();
  for (Gender g : kGenders) s.identities_per_gender[g] = 0;
  for (const auto& id : identities) ++s.identities_per_gender[id.gender];
  s.total_rows = manifest.rows.size();
  if (!identities.empty()) {
    s.utterances_min = std::numeric_limits<std::size_t>::max();
    for (const auto& id : identities) {
      auto it = manifest.per_identity_counts.find(id.id);
      const std::size_t c = it == manifest.per_identity_counts.end() ? 0 : it->second;
      s.utterances_min = std::min(s.utterances_min, c);
      s.utterances_max = std::max(s.utterances_max, c);
    }
    s.utterances_mean = static_cast<double>(s.total_rows) / static_cast<double>(identities.size());
  }
  return s;
}

void write_summary(std::ostream& out, const ManifestSummary& s, const ReportLines& extra) {
  char mean[40];
  std::snprintf(mean, sizeof(mean), "%.6f", s.utterances_mean);
  out << "total_identities = " << s.total_identities << '\n';
  for (const auto& [g, n] : s.identities_per_gender) out << "identities_" << to_string(g) << " = " << n << '\n';
  out << "total_rows = " << s.total_rows << '\n'
      << "utterances_min = " << s.utterances_min << '\n'
      << "utterances_mean = " << mean << '\n'
      << "utterances_max = " << s.utterances_max << '\n';
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
}

void write_identities(std::ostream& out, std::span<const SyntheticIdentity> identities) {
  out << "identity_id\tgender\tparent_a\tparent_b\talpha\n";
  for (const auto& s : identities) {
    out << s.id << '\t' << to_string(s.gender) << '\t' << s.parent_a << '\t' << s.parent_b << '\t'
        << format_double(s.alpha) << '\n';
  }
}

EmittedFiles emit(const SynthesisManifest& manifest, std::span<const SyntheticIdentity> identities,
                  const std::filesystem::path& output_dir, const ReportLines& extra) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create '" + output_dir.string() + "': " + ec.message());

  EmittedFiles files{output_dir / "embeddings.insd", output_dir / "identities.tsv",
                     output_dir / "manifest.tsv", output_dir / "summary.txt"};
  const std::size_t dim = identities.empty() ? 0 : identities.front().vector.size();

  write_bank_file(files.bank, to_bank(identities, dim));
  {
    auto out = open_out(files.identities);
    write_identities(out, identities);
    finish(out, files.identities);
  }
  {
    auto out = open_out(files.manifest);
    write_manifest(out, manifest);
    finish(out, files.manifest);
  }
  {
    auto out = open_out(files.summary);
    write_summary(out, summarize(manifest, identities), extra);
    finish(out, files.summary);
  }
  return files;
}

}  // namespace inside
