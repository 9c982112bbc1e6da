// inside-cli: embedding-space identity expansion driver.
//
// Subcommands: expand, plan, interpolate, diagnose, simulate.
// Exit codes: 0 ok, 2 input error, 3 capacity error, 4 I/O error. Every
// failure prints one line `error: <CATEGORY>: <detail>` on stderr.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "inside/error.hpp"
#include "inside/formats.hpp"
#include "inside/pipeline.hpp"

namespace {

using namespace inside;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Input: return 2;
    case ErrorCategory::Capacity: return 3;
    case ErrorCategory::Io: return 4;
  }
  return 2;
}

[[noreturn]] void input_error(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) input_error("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

// "male=3682,female=2312"
GenderTargets parse_targets(const std::string& text) {
  GenderTargets out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) input_error("targets must look like male=N,female=M");
    const auto g = parse_gender(item.substr(0, eq));
    if (!g) input_error("unknown gender in targets: '" + std::string(item.substr(0, eq)) + "'");
    out[*g] = parse_u64(item.substr(eq + 1), "target");
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

// "1,2,3" or "0-49" or a mix.
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(parse_u64(item, "seed"));
    } else {
      const auto lo = parse_u64(item.substr(0, dash), "seed");
      const auto hi = parse_u64(item.substr(dash + 1), "seed");
      if (hi < lo) input_error("empty seed range '" + std::string(item) + "'");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (seeds.empty()) input_error("no seeds given");
  return seeds;
}

struct TargetOptions {
  std::string targets;
  std::optional<std::uint64_t> total;
  std::string split = "proportional";
  std::string strategy = "nearest_neighbor";
  double alpha = 0.5;

  void attach(CLI::App* sub) {
    sub->add_option("--strategy", strategy, "random | nearest_neighbor")->capture_default_str();
    sub->add_option("--alpha", alpha, "interpolation coefficient")->capture_default_str();
    sub->add_option("--targets", targets, "per-gender targets, e.g. male=3682,female=2312");
    sub->add_option("--total", total, "total synthetic identities, split with --split");
    sub->add_option("--split", split, "proportional | even")->capture_default_str();
  }

  PairingStrategy parsed_strategy() const {
    auto s = parse_strategy(strategy);
    if (!s) input_error("unknown strategy '" + strategy + "'");
    return *s;
  }
  SplitPolicy parsed_split() const {
    auto s = parse_split_policy(split);
    if (!s) input_error("unknown split policy '" + split + "'");
    return *s;
  }
  std::optional<GenderTargets> parsed_targets() const {
    if (targets.empty()) return std::nullopt;
    return parse_targets(targets);
  }
};

// key = value file (CLI11 INI syntax); keys are long option names without
// dashes, optionally under a [<subcommand>] section. Command-line values win.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) input_error("config file '" + path + "' cannot be opened");
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub->get_name())) continue;
    if (item.name == "config" || item.name == "++" || item.name == "--") continue;  // section markers
    CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
    if (!opt) input_error("unknown key '" + item.name + "' in config file '" + path + "'");
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) input_error(std::string(flag) + " is required");
}

void print_summary(const ManifestSummary& s) {
  std::cout << "identities " << s.total_identities;
  for (const auto& [g, n] : s.identities_per_gender) std::cout << " " << to_string(g) << "=" << n;
  std::cout << " rows " << s.total_rows << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker identity expansion by interpolation in embedding space"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::string config;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "key = value config file; flags override it");
    sub->add_option("--seed", seed, "base seed")->capture_default_str();
    sub->add_option("--output-dir", output_dir, "output directory")->capture_default_str();
  };

  // expand
  PipelineConfig expand_cfg;
  TargetOptions expand_t;
  std::string embeddings, transcripts, mirror;
  auto* expand = app.add_subcommand("expand", "plan, interpolate, assign transcripts and emit a manifest");
  common(expand);
  expand_t.attach(expand);
  expand->add_option("--embeddings", embeddings, "real embedding bank (INSD or text)");
  expand->add_option("--transcripts", transcripts, "transcript pool, one per line");
  expand->add_option("--utterances", expand_cfg.utterances_per_identity, "utterances per identity")
      ->capture_default_str();
  expand->add_option("--mirror-counts", mirror, "id<TAB>count table of real speakers");
  expand->add_option("--min-words", expand_cfg.min_words)->capture_default_str();
  expand->add_option("--max-words", expand_cfg.max_words)->capture_default_str();

  // plan
  TargetOptions plan_t;
  std::string plan_embeddings;
  auto* plan = app.add_subcommand("plan", "build a pair plan");
  common(plan);
  plan_t.attach(plan);
  plan->add_option("--embeddings", plan_embeddings, "real embedding bank");

  // interpolate
  std::string interp_embeddings, interp_plan;
  auto* interp = app.add_subcommand("interpolate", "interpolate the pairs of a plan file");
  common(interp);
  interp->add_option("--embeddings", interp_embeddings, "real embedding bank");
  interp->add_option("--plan", interp_plan, "plan file");

  // diagnose
  DiagnoseConfig diag_cfg;
  std::string diag_real, diag_syn, diag_utts;
  auto* diagnose = app.add_subcommand("diagnose", "projection, similarity histogram and coverage data");
  common(diagnose);
  diagnose->add_option("--real", diag_real, "real embedding bank");
  diagnose->add_option("--synthetic", diag_syn, "synthetic embedding bank");
  diagnose->add_option("--utterances", diag_utts, "utterance bank with ids <identity>/<utterance>");
  diagnose->add_option("--probes", diag_cfg.probe_count)->capture_default_str();
  diagnose->add_option("--bins", diag_cfg.bins)->capture_default_str();
  diagnose->add_option("--max-pairs", diag_cfg.max_pairs_per_identity)->capture_default_str();

  // simulate
  std::string spec_path, seed_list = "0", sim_targets;
  auto* simulate = app.add_subcommand("simulate", "run the synthetic-population experiment");
  common(simulate);
  simulate->add_option("--spec", spec_path, "population spec file");
  simulate->add_option("--seeds", seed_list, "seed list, e.g. 0-49 or 1,2,3")->capture_default_str();
  simulate->add_option("--targets", sim_targets, "per-gender targets (default: real group sizes)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: INPUT: " << e.what() << '\n';
    return 2;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) apply_config(sub, config);

    if (expand->parsed()) {
      require(embeddings, "--embeddings");
      require(transcripts, "--transcripts");
      expand_cfg.embeddings_path = embeddings;
      expand_cfg.transcripts_path = transcripts;
      expand_cfg.output_dir = output_dir;
      expand_cfg.seed = seed;
      expand_cfg.strategy = expand_t.parsed_strategy();
      expand_cfg.alpha = expand_t.alpha;
      expand_cfg.per_gender_targets = expand_t.parsed_targets();
      expand_cfg.total_target = expand_t.total;
      expand_cfg.split = expand_t.parsed_split();
      if (!mirror.empty()) expand_cfg.mirror_counts_path = mirror;
      const auto r = cmd_expand(expand_cfg);
      print_summary(r.summary);
      std::cout << "wrote " << r.files.manifest.string() << '\n';
    } else if (plan->parsed()) {
      require(plan_embeddings, "--embeddings");
      PlanConfig c;
      c.embeddings_path = plan_embeddings;
      c.output_dir = output_dir;
      c.seed = seed;
      c.strategy = plan_t.parsed_strategy();
      c.alpha = plan_t.alpha;
      c.per_gender_targets = plan_t.parsed_targets();
      c.total_target = plan_t.total;
      c.split = plan_t.parsed_split();
      const auto p = cmd_plan(c);
      std::cout << "planned " << p.pairs.size() << " pairs, max level " << p.max_level_reached << '\n';
    } else if (interp->parsed()) {
      require(interp_embeddings, "--embeddings");
      require(interp_plan, "--plan");
      const auto ids = cmd_interpolate(interp_embeddings, interp_plan, output_dir);
      std::cout << "interpolated " << ids.size() << " identities\n";
    } else if (diagnose->parsed()) {
      require(diag_real, "--real");
      diag_cfg.real_path = diag_real;
      if (!diag_syn.empty()) diag_cfg.synthetic_path = diag_syn;
      if (!diag_utts.empty()) diag_cfg.utterances_path = diag_utts;
      diag_cfg.output_dir = output_dir;
      diag_cfg.seed = seed;
      const auto r = cmd_diagnose(diag_cfg);
      std::cout << "coverage before " << r.coverage.mean_before << " after " << r.coverage.mean_after << '\n';
    } else if (simulate->parsed()) {
      require(spec_path, "--spec");
      const auto seeds = parse_seed_list(seed_list);
      const GenderTargets targets = sim_targets.empty() ? GenderTargets{} : parse_targets(sim_targets);
      const auto r = cmd_simulate(spec_path, seeds, targets, output_dir);
      std::cout << "energy_win_rate " << r.energy_win_rate << " coverage_win_rate " << r.coverage_win_rate
                << " intra_gap_rate " << r.intra_gap_rate << '\n';
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: INPUT: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.category()) << ": " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: IO: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
