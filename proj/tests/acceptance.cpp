// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Usage: acceptance [work-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "inside/error.hpp"
#include "inside/formats.hpp"
#include "inside/pipeline.hpp"
#include "oracles/planner_oracle.hpp"
#include "oracles/slerp_oracle.hpp"

using namespace inside;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

// ---- 1 -------------------------------------------------------------------

Outcome slerp_suite() {
  constexpr std::size_t kPairs = 100000;
  Stopwatch sw;
  Rng rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_norm = 0.0, worst_angle = 0.0, worst_sym = 0.0;
  std::size_t endpoint_failures = 0, total = 0;
  for (std::size_t dim : {2u, 16u, 512u}) {
    for (std::size_t n = 0; n < kPairs;) {
      const auto a = fixtures::random_unit(dim, rng);
      const auto b = fixtures::random_unit(dim, rng);
      const double theta = static_cast<double>(oracle::angle_ld(a, b));
      if (theta <= 1e-3 || theta >= std::numbers::pi - 1e-3) continue;
      const double alpha = unit(rng);
      const auto r = slerp(a, b, InterpolationCoefficient(alpha));
      const auto s = slerp(b, a, InterpolationCoefficient(1.0 - alpha));
      worst_norm = std::max(worst_norm, std::abs(std::sqrt(dot(r, r)) - 1.0));
      worst_angle = std::max(worst_angle, std::abs(static_cast<double>(oracle::angle_ld(r, a)) - alpha * theta));
      for (std::size_t k = 0; k < dim; ++k) worst_sym = std::max(worst_sym, std::abs(r[k] - s[k]));
      if (slerp(a, b, InterpolationCoefficient(0.0)) != a || slerp(a, b, InterpolationCoefficient(1.0)) != b) {
        ++endpoint_failures;
      }
      ++n;
      ++total;
    }
  }
  const double secs = sw.seconds();
  const bool pass = worst_norm <= 1e-6 && worst_angle <= 1e-6 && worst_sym <= 1e-9 && endpoint_failures == 0 &&
                    secs < 10.0;
  return {pass, fmt("%zu pairs, max |norm-1| %.2e, max angle err %.2e, max symmetry err %.2e, "
                    "endpoint mismatches %zu, %.2fs",
                    total, worst_norm, worst_angle, worst_sym, endpoint_failures, secs)};
}

// ---- 2 -------------------------------------------------------------------

Outcome slerp_analytic() {
  const auto m = slerp(Vector{1, 0}, Vector{0, 1}, InterpolationCoefficient(0.5));
  const double analytic_err =
      std::max(std::abs(m[0] - std::numbers::sqrt2 / 2), std::abs(m[1] - std::numbers::sqrt2 / 2));

  Rng rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> dims(2, 64);
  double worst = 0.0;
  std::size_t fallback = 0;
  constexpr std::size_t kPairs = 20000;
  for (std::size_t n = 0; n < kPairs; ++n) {
    const std::size_t dim = dims(rng);
    const auto a = fixtures::random_unit(dim, rng);
    auto t = fixtures::random_unit(dim, rng);
    const double p = dot(t, a);
    for (std::size_t k = 0; k < dim; ++k) t[k] -= p * a[k];
    t = normalize(t);
    // log-uniform angle in (1e-7, 1e-5)
    const double theta = std::pow(10.0, -7.0 + 2.0 * unit(rng));
    Vector b(dim);
    for (std::size_t k = 0; k < dim; ++k) b[k] = std::cos(theta) * a[k] + std::sin(theta) * t[k];
    if (angle_between(a, b) < kSmallAngle) ++fallback;
    const double alpha = unit(rng);
    const auto got = slerp(a, b, InterpolationCoefficient(alpha));
    const auto want = oracle::slerp_ld(a, b, alpha);
    for (std::size_t k = 0; k < dim; ++k) worst = std::max(worst, std::abs(got[k] - static_cast<double>(want[k])));
  }
  const bool pass = analytic_err <= 1e-12 && worst <= 1e-6 && fallback > 0;
  return {pass, fmt("midpoint err %.2e; %zu near-parallel pairs (%zu via fallback), max err vs oracle %.2e",
                    analytic_err, kPairs, fallback, worst)};
}

// ---- 3 -------------------------------------------------------------------

Outcome planner_oracle() {
  Stopwatch sw;
  Rng rng(3);
  std::uniform_int_distribution<std::size_t> sizes(4, 512), dims(4, 64), mode(0, 3);
  std::size_t mismatches = 0, instances = 0, full = 0;
  for (; instances < 100; ++instances) {
    const std::size_t m = sizes(rng), f = sizes(rng);
    const auto set = fixtures::random_set(m, f, dims(rng), rng());
    GenderTargets targets;
    for (auto [g, n] : {std::pair{Gender::Male, m}, {Gender::Female, f}}) {
      std::uint64_t t = 0;
      switch (mode(rng)) {
        case 0: t = std::uniform_int_distribution<std::uint64_t>(1, n)(rng); break;
        case 1: t = std::uniform_int_distribution<std::uint64_t>(n, std::min<std::uint64_t>(8 * n, choose2(n)))(rng); break;
        case 2: t = std::uniform_int_distribution<std::uint64_t>(1, std::min<std::uint64_t>(300, choose2(n)))(rng); break;
        default:
          // whole-capacity runs walk every level; keep them to smaller groups
          t = n <= 96 ? choose2(n) : std::uniform_int_distribution<std::uint64_t>(1, 2 * n)(rng);
          full += n <= 96;
      }
      targets[g] = t;
    }
    const std::uint64_t seed = rng();
    const auto plan = plan_pairs_nearest_neighbor(set, targets, seed);
    auto want = oracle::nn_plan_group(set, Gender::Male, targets[Gender::Male], seed);
    const auto fem = oracle::nn_plan_group(set, Gender::Female, targets[Gender::Female], seed);
    want.pairs.insert(want.pairs.end(), fem.pairs.begin(), fem.pairs.end());

    std::vector<oracle::IdPair> got;
    for (const auto& p : plan.pairs) got.emplace_back(p.id_a, p.id_b);
    const bool same_set = std::set(got.begin(), got.end()) == std::set(want.pairs.begin(), want.pairs.end());
    if (!same_set || got != want.pairs || plan.max_level_reached != std::max(want.levels, fem.levels)) ++mismatches;
  }
  const double secs = sw.seconds();
  return {mismatches == 0 && secs < 60.0,
          fmt("%zu instances (%zu whole-capacity groups), %zu mismatches, %.2fs", instances, full, mismatches, secs)};
}

// ---- 4 -------------------------------------------------------------------

Outcome planner_invariants() {
  Rng rng(4);
  std::uniform_int_distribution<std::size_t> sizes(2, 80), dims(2, 24);
  std::size_t violations = 0, plans = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = sizes(rng), f = sizes(rng);
    const auto set = fixtures::random_set(m, f, dims(rng), rng());
    const GenderTargets targets{{Gender::Male, std::uniform_int_distribution<std::uint64_t>(0, choose2(m))(rng)},
                                {Gender::Female, std::uniform_int_distribution<std::uint64_t>(0, choose2(f))(rng)}};
    const std::uint64_t seed = rng();
    for (auto strategy : {PairingStrategy::Random, PairingStrategy::NearestNeighbor}) {
      ++plans;
      const auto a = plan_pairs(strategy, set, targets, seed);
      const auto b = plan_pairs(strategy, set, targets, seed);
      const auto c = plan_pairs(strategy, set, targets, seed);
      std::set<std::pair<std::string, std::string>> seen;
      std::map<Gender, std::uint64_t> per_gender;
      bool ok = a == b && b == c && a.pairs.size() == targets.at(Gender::Male) + targets.at(Gender::Female);
      for (const auto& p : a.pairs) {
        ok = ok && p.id_a < p.id_b && seen.emplace(p.id_a, p.id_b).second;
        ok = ok && set.at(p.id_a).gender == set.at(p.id_b).gender;
        ++per_gender[set.at(p.id_a).gender];
      }
      ok = ok && per_gender[Gender::Male] == targets.at(Gender::Male) &&
           per_gender[Gender::Female] == targets.at(Gender::Female);

      // capacity law on each gender
      for (auto [g, n] : {std::pair{Gender::Male, m}, {Gender::Female, f}}) {
        try {
          ok = ok && plan_pairs(strategy, set, {{g, choose2(n)}}, seed).pairs.size() == choose2(n);
        } catch (const Error&) {
          ok = false;
        }
        try {
          plan_pairs(strategy, set, {{g, choose2(n) + 1}}, seed);
          ok = false;
        } catch (const Error& e) {
          ok = ok && e.kind() == ErrorKind::TargetExceedsCapacity;
        }
      }
      violations += !ok;
    }
  }
  return {violations == 0, fmt("%zu plans checked (uniqueness, gender, capacity law, 3-run determinism), %zu violations",
                               plans, violations)};
}

// ---- 5 -------------------------------------------------------------------

std::size_t data_lines(const fs::path& manifest) {
  std::ifstream in(manifest, std::ios::binary);
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines == 0 ? 0 : lines - 1;  // header
}

// 1,092,009 utterances spread over 5,994 speakers.
void write_count_table(const fs::path& path, const EmbeddingSet& real) {
  constexpr std::size_t kTotal = 1092009;
  const std::size_t n = real.size();
  std::ofstream out(path);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = kTotal / n + (i < kTotal % n ? 1 : 0);
    // zero-sum wobble so the counts are not all equal
    std::size_t c = base;
    if (i % 2 == 1) c -= (i - 1) % 37;
    else if (i + 1 < n) c += i % 37;
    out << real[i].id << '\t' << c << '\n';
  }
}

Outcome full_count_reconstruction(const fs::path& work) {
  Stopwatch sw;
  const fs::path dir = work / "full-count";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const EmbeddingSet real = fixtures::random_set(3682, 2312, 512, 5);
  write_bank_file(dir / "real.insd", to_bank(real));
  {
    // short single-letter words keep a million-row manifest small on disk
    std::ofstream t(dir / "texts.txt");
    for (std::size_t i = 0; i < 400; ++i) {
      const std::size_t words = 100 + i % 151;
      for (std::size_t w = 0; w < words; ++w) t << static_cast<char>('a' + (i + w) % 26) << (w + 1 == words ? '\n' : ' ');
    }
  }
  write_count_table(dir / "counts.tsv", real);

  PipelineConfig nn;
  nn.embeddings_path = dir / "real.insd";
  nn.transcripts_path = dir / "texts.txt";
  nn.output_dir = dir / "nn";
  nn.mirror_counts_path = dir / "counts.tsv";
  nn.seed = 2025;
  const auto r_nn = cmd_expand(nn);
  const std::size_t nn_rows = data_lines(r_nn.files.manifest);
  const bool nn_ok = r_nn.summary.total_identities == 5994 &&
                     r_nn.summary.identities_per_gender.at(Gender::Male) == 3682 &&
                     r_nn.summary.identities_per_gender.at(Gender::Female) == 2312 && nn_rows == 1092009;
  fs::remove(r_nn.files.manifest);

  PipelineConfig exp = nn;
  exp.output_dir = dir / "id-exp";
  exp.mirror_counts_path.reset();
  exp.total_target = 40000;
  exp.split = SplitPolicy::Even;
  exp.utterances_per_identity = 25;
  const auto r_exp = cmd_expand(exp);
  const std::size_t exp_rows = data_lines(r_exp.files.manifest);
  const bool exp_ok = r_exp.summary.total_identities == 40000 &&
                      r_exp.summary.identities_per_gender.at(Gender::Male) == 20000 &&
                      r_exp.summary.identities_per_gender.at(Gender::Female) == 20000 &&
                      r_exp.summary.total_rows == 1000000 && exp_rows == 1000000;
  const double secs = sw.seconds();
  fs::remove_all(dir);

  return {nn_ok && exp_ok && secs < 300.0,
          fmt("NN %zu identities (%zu/%zu), %zu rows; ID-Exp %zu identities (%zu/%zu), %zu rows, max level %zu; %.1fs",
              r_nn.summary.total_identities, r_nn.summary.identities_per_gender.at(Gender::Male),
              r_nn.summary.identities_per_gender.at(Gender::Female), nn_rows, r_exp.summary.total_identities,
              r_exp.summary.identities_per_gender.at(Gender::Male),
              r_exp.summary.identities_per_gender.at(Gender::Female), exp_rows, r_exp.plan.max_level_reached, secs)};
}

// ---- 6, 7 ----------------------------------------------------------------

PopulationSpec clustered_spec(double utterance_kappa, std::optional<double> synthetic_kappa) {
  PopulationSpec spec;
  spec.dimension = 16;
  spec.utterance_kappa = utterance_kappa;
  spec.synthetic_utterance_kappa = synthetic_kappa;
  spec.utterances_per_identity = 10;
  spec.probe_count = 500;
  for (Gender g : kGenders)
    for (int c = 0; c < 2; ++c) spec.clusters.push_back({std::nullopt, 50.0, 75, g});
  return spec;
}

std::vector<std::uint64_t> fifty_seeds() {
  std::vector<std::uint64_t> s(50);
  for (std::uint64_t i = 0; i < 50; ++i) s[i] = i;
  return s;
}

Outcome distribution_match() {
  const auto report = run_experiment(clustered_spec(100.0, std::nullopt), {}, fifty_seeds());
  const bool pass = report.energy_win_rate >= 0.9 && report.coverage_win_rate >= 0.9;
  return {pass, fmt("300 identities, 4 clusters, 50 seeds: energy win rate %.2f (gate 0.90), coverage win rate %.2f "
                    "(gate 0.90)",
                    report.energy_win_rate, report.coverage_win_rate)};
}

Outcome intra_class_gap() {
  const auto report = run_experiment(clustered_spec(100.0, 400.0), {}, fifty_seeds());
  std::size_t gaps = 0;
  for (const auto& o : report.runs) gaps += o.intra_synthetic_mean > o.intra_real_mean;
  const auto& first = report.runs.front();
  return {gaps == report.runs.size() && report.histograms_conserved,
          fmt("%zu/%zu seeds with synthetic mean > real mean (seed 0: %.4f vs %.4f), histograms conserved: %s", gaps,
              report.runs.size(), first.intra_synthetic_mean, first.intra_real_mean,
              report.histograms_conserved ? "yes" : "no")};
}

// ---- 8 -------------------------------------------------------------------

Outcome expand_determinism(const fs::path& work) {
  const fs::path dir = work / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_bank_file(dir / "real.insd", to_bank(fixtures::random_set(300, 200, 64, 8)));
  std::ofstream(dir / "texts.txt") << fixtures::transcript_corpus(200, 90, 260);

  PipelineConfig c;
  c.embeddings_path = dir / "real.insd";
  c.transcripts_path = dir / "texts.txt";
  c.total_target = 2000;
  c.seed = 99;
  std::size_t differing = 0;
  for (auto strategy : {PairingStrategy::NearestNeighbor, PairingStrategy::Random}) {
    c.strategy = strategy;
    c.output_dir = dir / "a";
    const auto a = cmd_expand(c);
    c.output_dir = dir / "b";
    const auto b = cmd_expand(c);
    for (auto [x, y] : {std::pair{a.files.bank, b.files.bank}, {a.files.manifest, b.files.manifest},
                        {a.files.summary, b.files.summary}}) {
      const auto bx = fixtures::slurp(x);
      differing += bx.empty() || bx != fixtures::slurp(y);
    }
  }
  fs::remove_all(dir);
  return {differing == 0, fmt("2 strategies x (bank, manifest, summary): %zu differing files", differing)};
}

// ---- 9 -------------------------------------------------------------------

Outcome format_round_trips() {
  std::size_t failures = 0, cases = 0;
  Rng rng(9);
  for (auto [m, f, d] : {std::tuple{5u, 3u, 2u}, {40u, 60u, 192u}, {3682u, 2312u, 512u}}) {
    const auto set = fixtures::random_set(m, f, d, rng());
    const auto bank = to_bank(set);
    for (bool binary : {true, false}) {
      ++cases;
      std::stringstream first;
      binary ? write_bank(first, bank) : write_bank_text(first, bank);
      std::istringstream in(first.str());
      const auto back = read_bank(in);
      std::stringstream second;
      binary ? write_bank(second, back) : write_bank_text(second, back);
      failures += !(back == bank) || second.str() != first.str();
    }
    for (auto strategy : {PairingStrategy::Random, PairingStrategy::NearestNeighbor}) {
      ++cases;
      const auto plan = plan_pairs(strategy, set, split_targets(set, set.size(),
                                                                SplitPolicy::Proportional),
                                   rng(), AlphaPolicy{std::uniform_real_distribution<double>(0, 1)(rng)});
      std::stringstream first;
      write_plan(first, plan, d);
      std::istringstream in(first.str());
      const auto back = read_plan(in);
      std::stringstream second;
      write_plan(second, back.plan, back.dimension);
      failures += back.plan.pairs != plan.pairs || second.str() != first.str();
    }
  }
  return {failures == 0, fmt("%zu round trips (binary bank, text bank, plan), %zu not bit-exact", cases, failures)};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "inside-acceptance";
  fs::create_directories(work);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 slerp correctness suite", slerp_suite},
      {"AC2 analytic slerp values and near-parallel fallback", slerp_analytic},
      {"AC3 planner oracle equivalence", planner_oracle},
      {"AC4 planner invariants", planner_invariants},
      {"AC5 full-count dataset reconstruction", [&] { return full_count_reconstruction(work); }},
      {"AC6 NN vs random distribution match", distribution_match},
      {"AC7 intra-class similarity contrast", intra_class_gap},
      {"AC8 expand determinism", [&] { return expand_determinism(work); }},
      {"AC9 format round trips", format_round_trips},
  };

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
