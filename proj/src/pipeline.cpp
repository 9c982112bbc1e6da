#include "inside/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "inside/error.hpp"
#include "inside/formats.hpp"
#include "inside/random.hpp"

namespace inside {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

EmbeddingSet load_set(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::InvalidArgument, "embeddings file '" + path.string() + "' does not exist");
  }
  return to_embedding_set(read_bank_file(path));
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create '" + dir.string() + "': " + ec.message());
}

GenderTargets targets_from(const std::optional<GenderTargets>& explicit_targets,
                           const std::optional<std::uint64_t>& total, SplitPolicy split,
                           const EmbeddingSet& real) {
  if (explicit_targets) return *explicit_targets;
  return split_targets(real, total.value_or(real.size()), split);
}

}  // namespace

GenderTargets resolve_targets(const PipelineConfig& c, const EmbeddingSet& real) {
  return targets_from(c.per_gender_targets, c.total_target, c.split, real);
}

ExpandResult cmd_expand(const PipelineConfig& config) {
  const EmbeddingSet real = load_set(config.embeddings_path);

  std::ifstream transcripts(config.transcripts_path);
  if (!transcripts) {
    throw Error(ErrorKind::InvalidArgument,
                "transcripts file '" + config.transcripts_path.string() + "' cannot be opened");
  }
  const auto pool = ingest_transcripts(transcripts, config.min_words, config.max_words);

  ExpandResult r;
  const std::uint64_t plan_seed = derive_seed(config.seed, "plan");
  r.plan = plan_pairs(config.strategy, real, resolve_targets(config, real), plan_seed,
                      AlphaPolicy{config.alpha});
  r.identities = execute_plan(real, r.plan);

  const std::uint64_t text_seed = derive_seed(config.seed, "texts");
  SynthesisManifest manifest;
  if (config.mirror_counts_path) {
    std::ifstream table_in(*config.mirror_counts_path);
    if (!table_in) {
      throw Error(ErrorKind::InvalidArgument,
                  "count table '" + config.mirror_counts_path->string() + "' cannot be opened");
    }
    const auto counts = mirror_counts(real, read_count_table(table_in), r.identities);
    manifest = assign_texts(r.identities, pool, counts, text_seed);
  } else {
    manifest = assign_texts(r.identities, pool, config.utterances_per_identity, text_seed);
  }

  const ReportLines extra = {
      {"strategy", std::string(to_string(config.strategy))},
      {"seed", std::to_string(config.seed)},
      {"alpha", fmt(config.alpha)},
      {"transcript_pool", std::to_string(pool.size())},
      {"max_level_reached", std::to_string(r.plan.max_level_reached)},
  };
  r.files = emit(manifest, r.identities, config.output_dir, extra);
  r.summary = summarize(manifest, r.identities);
  r.plan_file = config.output_dir / "plan.txt";
  write_plan_file(r.plan_file, r.plan, real.dimension());
  return r;
}

PairPlan cmd_plan(const PlanConfig& c) {
  const EmbeddingSet real = load_set(c.embeddings_path);
  const PairPlan plan =
      plan_pairs(c.strategy, real, targets_from(c.per_gender_targets, c.total_target, c.split, real),
                 derive_seed(c.seed, "plan"), AlphaPolicy{c.alpha});
  make_dir(c.output_dir);
  write_plan_file(c.output_dir / "plan.txt", plan, real.dimension());
  return plan;
}

std::vector<SyntheticIdentity> cmd_interpolate(const std::filesystem::path& embeddings_path,
                                               const std::filesystem::path& plan_path,
                                               const std::filesystem::path& output_dir) {
  const EmbeddingSet real = load_set(embeddings_path);
  if (!std::filesystem::exists(plan_path)) {
    throw Error(ErrorKind::InvalidArgument, "plan file '" + plan_path.string() + "' does not exist");
  }
  const PlanFile file = read_plan_file(plan_path);
  if (file.dimension != real.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "plan was built for dimension " + std::to_string(file.dimension) +
                                                  ", embeddings have " + std::to_string(real.dimension()));
  }
  auto identities = execute_plan(real, file.plan);
  make_dir(output_dir);
  write_bank_file(output_dir / "embeddings.insd", to_bank(identities, real.dimension()));
  std::ofstream out(output_dir / "identities.tsv", std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + (output_dir / "identities.tsv").string() + "'");
  write_identities(out, identities);
  return identities;
}

UtteranceGroups group_utterances(const EmbeddingBank& bank) {
  UtteranceGroups groups;
  for (const auto& rec : bank.records) {
    const auto slash = rec.id.rfind('/');
    const std::string identity = slash == std::string::npos ? rec.id : rec.id.substr(0, slash);
    groups[identity].push_back(normalize(Vector(rec.values.begin(), rec.values.end())));
  }
  return groups;
}

DiagnoseResult cmd_diagnose(const DiagnoseConfig& c) {
  const EmbeddingSet real = load_set(c.real_path);
  std::vector<SyntheticIdentity> synthetic;
  if (c.synthetic_path) {
    const EmbeddingSet syn = load_set(*c.synthetic_path);
    if (syn.dimension() != real.dimension()) {
      throw Error(ErrorKind::DimensionMismatch, "synthetic and real banks differ in dimension");
    }
    for (const auto& e : syn.records()) {
      SyntheticIdentity s;
      s.id = e.id;
      s.gender = e.gender;
      s.vector = e.vector;
      synthetic.push_back(std::move(s));
    }
  }

  DiagnoseResult r;
  r.projection = project_2d(real, synthetic);
  r.coverage = coverage_gain(real, synthetic, c.probe_count, derive_seed(c.seed, "probes"));
  if (c.utterances_path) {
    if (!std::filesystem::exists(*c.utterances_path)) {
      throw Error(ErrorKind::InvalidArgument, "utterance bank '" + c.utterances_path->string() + "' does not exist");
    }
    r.histogram = intra_class_similarity(group_utterances(read_bank_file(*c.utterances_path)),
                                         c.max_pairs_per_identity, derive_seed(c.seed, "intra"), c.bins);
  }

  make_dir(c.output_dir);
  auto write = [&](const std::filesystem::path& name, auto&& fn) {
    const auto path = c.output_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
    fn(out);
    if (!out.flush()) throw Error(ErrorKind::IoFailure, "failed writing '" + path.string() + "'");
  };
  write("projection.tsv", [&](std::ostream& o) { write_projection(o, r.projection); });
  write("coverage.txt", [&](std::ostream& o) { write_coverage(o, r.coverage); });
  if (r.histogram) write("histogram.tsv", [&](std::ostream& o) { write_histogram(o, *r.histogram); });
  return r;
}

ExperimentReport cmd_simulate(const std::filesystem::path& spec_path,
                              std::span<const std::uint64_t> seeds, const GenderTargets& targets,
                              const std::filesystem::path& output_dir) {
  if (!std::filesystem::exists(spec_path)) {
    throw Error(ErrorKind::InvalidArgument, "population spec '" + spec_path.string() + "' does not exist");
  }
  const PopulationSpec spec = read_population_spec_file(spec_path);
  ExperimentReport report = run_experiment(spec, targets, seeds);
  make_dir(output_dir);
  const auto path = output_dir / "report.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
  write_report(out, report);
  if (!out.flush()) throw Error(ErrorKind::IoFailure, "failed writing '" + path.string() + "'");
  return report;
}

}  // namespace inside
