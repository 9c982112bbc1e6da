#include "inside/simulation.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "inside/error.hpp"
#include "inside/kernels.hpp"

namespace inside {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

[[noreturn]] void bad_spec(std::size_t lineno, const std::string& msg) {
  throw Error(ErrorKind::InvalidSpec, "population spec line " + std::to_string(lineno) + ": " + msg);
}

template <typename T>
T number(const std::string& text, std::size_t lineno) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) bad_spec(lineno, "bad number '" + text + "'");
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RowMatrix to_matrix(const EmbeddingSet& set) {
  RowMatrix m(set.size(), set.dimension());
  for (std::size_t i = 0; i < set.size(); ++i) std::copy(set[i].vector.begin(), set[i].vector.end(), m.row(i).begin());
  return m;
}

RowMatrix to_matrix(std::span<const SyntheticIdentity> ids, std::size_t dim) {
  RowMatrix m(ids.size(), dim);
  for (std::size_t i = 0; i < ids.size(); ++i) std::copy(ids[i].vector.begin(), ids[i].vector.end(), m.row(i).begin());
  return m;
}

bool conserved(const SimilarityHistogram& h) {
  std::uint64_t total = 0;
  for (auto c : h.counts) total += c;
  return total == h.sample_count;
}

}  // namespace

void validate(PopulationSpec& spec) {
  if (spec.dimension < 2) throw Error(ErrorKind::InvalidSpec, "dimension must be at least 2");
  if (spec.clusters.empty()) throw Error(ErrorKind::InvalidSpec, "at least one cluster is required");
  if (!(spec.utterance_kappa >= 0.0)) throw Error(ErrorKind::InvalidSpec, "utterance_kappa must be >= 0");
  if (spec.synthetic_utterance_kappa && !(*spec.synthetic_utterance_kappa >= 0.0)) {
    throw Error(ErrorKind::InvalidSpec, "synthetic_utterance_kappa must be >= 0");
  }
  if (spec.utterances_per_identity < 2) {
    throw Error(ErrorKind::InvalidSpec, "utterances_per_identity must be at least 2");
  }
  if (spec.probe_count < 1) throw Error(ErrorKind::InvalidSpec, "probe_count must be at least 1");
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    auto& cl = spec.clusters[c];
    const std::string where = "cluster " + std::to_string(c) + ": ";
    if (!(cl.kappa >= 0.0) || !std::isfinite(cl.kappa)) throw Error(ErrorKind::InvalidSpec, where + "kappa must be >= 0");
    if (cl.members < 1) throw Error(ErrorKind::InvalidSpec, where + "members must be >= 1");
    if (cl.center) {
      if (cl.center->size() != spec.dimension) throw Error(ErrorKind::InvalidSpec, where + "center has the wrong dimension");
      try {
        *cl.center = normalize(*cl.center);
      } catch (const Error&) {
        throw Error(ErrorKind::InvalidSpec, where + "center must be non-zero");
      }
    }
  }
}

PopulationSpec parse_population_spec(std::istream& in) {
  PopulationSpec spec;
  spec.clusters.clear();
  std::string raw;
  std::size_t lineno = 0;
  ClusterSpec* current = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line == "[cluster]" || line == "[clusters]") {
      current = &spec.clusters.emplace_back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad_spec(lineno, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    if (current) {
      if (key == "gender") {
        const auto g = parse_gender(value);
        if (!g) bad_spec(lineno, "unknown gender '" + value + "'");
        current->gender = *g;
      } else if (key == "kappa") {
        current->kappa = number<double>(value, lineno);
      } else if (key == "members") {
        current->members = number<std::size_t>(value, lineno);
      } else if (key == "center") {
        if (value == "random") {
          current->center.reset();
        } else {
          Vector c;
          std::size_t from = 0;
          while (from <= value.size()) {
            const auto comma = value.find(',', from);
            c.push_back(number<double>(trim(std::string_view(value).substr(from, comma - from)), lineno));
            if (comma == std::string::npos) break;
            from = comma + 1;
          }
          current->center = std::move(c);
        }
      } else {
        bad_spec(lineno, "unknown cluster key '" + key + "'");
      }
      continue;
    }

    if (key == "dimension") spec.dimension = number<std::size_t>(value, lineno);
    else if (key == "utterance_kappa") spec.utterance_kappa = number<double>(value, lineno);
    else if (key == "synthetic_utterance_kappa") spec.synthetic_utterance_kappa = number<double>(value, lineno);
    else if (key == "utterances_per_identity") spec.utterances_per_identity = number<std::size_t>(value, lineno);
    else if (key == "probe_count") spec.probe_count = number<std::size_t>(value, lineno);
    else if (key == "seed") spec.seed = number<std::uint64_t>(value, lineno);
    else bad_spec(lineno, "unknown key '" + key + "'");
  }
  validate(spec);
  return spec;
}

PopulationSpec read_population_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "'");
  return parse_population_spec(in);
}

Vector sample_uniform_sphere(std::size_t dimension, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector v(dimension);
  for (;;) {
    for (double& x : v) x = normal(rng);
    if (dot(v, v) > 1e-20) return normalize(v);
  }
}

Vector sample_vmf(std::span<const double> mean, double kappa, Rng& rng) {
  const std::size_t d = mean.size();
  if (kappa == 0.0) return sample_uniform_sphere(d, rng);

  const double dm1 = static_cast<double>(d - 1);
  // Stable form of b; the textbook expression cancels badly for large kappa.
  const double b = dm1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);

  std::gamma_distribution<double> gamma(dm1 / 2.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double w = 0.0;
  for (;;) {
    const double g1 = gamma(rng);
    const double g2 = gamma(rng);
    const double z = g1 / (g1 + g2);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = unit(rng);
    if (kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  // Uniform direction in the tangent space at `mean`.
  std::normal_distribution<double> normal;
  Vector v(d);
  double vn = 0.0;
  do {
    for (double& x : v) x = normal(rng);
    const double proj = dot(v, mean);
    for (std::size_t k = 0; k < d; ++k) v[k] -= proj * mean[k];
    vn = std::sqrt(dot(v, v));
  } while (vn < 1e-12);

  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  Vector out(d);
  for (std::size_t k = 0; k < d; ++k) out[k] = w * mean[k] + s * v[k] / vn;
  return normalize(out);
}

Population sample_population(const PopulationSpec& input) {
  PopulationSpec spec = input;
  validate(spec);
  Rng rng(derive_seed(spec.seed, "population"));
  Population pop{EmbeddingSet(spec.dimension), {}};
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const auto& cl = spec.clusters[c];
    const Vector center = cl.center ? *cl.center : sample_uniform_sphere(spec.dimension, rng);
    for (std::size_t m = 0; m < cl.members; ++m) {
      char id[32];
      std::snprintf(id, sizeof(id), "spk-c%02zu-%05zu", c, m);
      Vector dir = sample_vmf(center, cl.kappa, rng);
      auto& utts = pop.utterances[id];
      for (std::size_t u = 0; u < spec.utterances_per_identity; ++u) {
        utts.push_back(sample_vmf(dir, spec.utterance_kappa, rng));
      }
      pop.identities.add({id, cl.gender, std::move(dir)});
    }
  }
  return pop;
}

UtteranceGroups sample_utterances(std::span<const SyntheticIdentity> identities, double kappa,
                                  std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  UtteranceGroups out;
  for (const auto& s : identities) {
    auto& utts = out[s.id];
    for (std::size_t u = 0; u < count; ++u) utts.push_back(sample_vmf(s.vector, kappa, rng));
  }
  return out;
}

ExperimentReport run_experiment(const PopulationSpec& input, const GenderTargets& targets,
                                std::span<const std::uint64_t> seeds) {
  PopulationSpec base = input;
  validate(base);
  const double syn_kappa = base.synthetic_utterance_kappa.value_or(base.utterance_kappa);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  ExperimentReport report;
  std::size_t energy_wins = 0, coverage_wins = 0, intra_gaps = 0;
  for (std::uint64_t seed : seeds) {
    PopulationSpec spec = base;
    spec.seed = derive_seed(base.seed, "population/" + std::to_string(seed));
    const Population pop = sample_population(spec);

    GenderTargets t = targets;
    if (t.empty()) {
      for (Gender g : kGenders) t[g] = pop.identities.group(g).size();
    }
    const std::uint64_t plan_seed = derive_seed(seed, "plan");
    const auto nn = execute_plan(pop.identities, plan_pairs_nearest_neighbor(pop.identities, t, plan_seed));
    const auto rnd = execute_plan(pop.identities, plan_pairs_random(pop.identities, t, plan_seed));

    SeedOutcome o;
    o.seed = seed;
    o.synthetic_count = nn.size();

    const RowMatrix real_m = to_matrix(pop.identities);
    if (nn.empty()) {
      o.energy_nn = o.energy_random = nan;
    } else {
      o.energy_nn = kernels::energy_distance(to_matrix(nn, spec.dimension), real_m);
      o.energy_random = kernels::energy_distance(to_matrix(rnd, spec.dimension), real_m);
    }

    const RowMatrix probes = sample_probes(pop.identities, spec.probe_count, derive_seed(seed, "probes"));
    const auto cov_nn = coverage_with_probes(pop.identities, nn, probes);
    const auto cov_rnd = coverage_with_probes(pop.identities, rnd, probes);
    o.coverage_before = cov_nn.mean_before;
    o.coverage_after_nn = cov_nn.mean_after;
    o.coverage_after_random = cov_rnd.mean_after;

    const std::uint64_t intra_seed = derive_seed(seed, "intra");
    const auto real_hist = intra_class_similarity(pop.utterances, kDefaultMaxPairsPerIdentity, intra_seed);
    o.intra_real_mean = real_hist.mean;
    o.histograms_conserved = conserved(real_hist);
    if (nn.empty()) {
      o.intra_synthetic_mean = nan;
    } else {
      const auto syn_utts = sample_utterances(nn, syn_kappa, spec.utterances_per_identity,
                                              derive_seed(seed, "synthetic-utterances"));
      const auto syn_hist = intra_class_similarity(syn_utts, kDefaultMaxPairsPerIdentity, intra_seed);
      o.intra_synthetic_mean = syn_hist.mean;
      o.histograms_conserved = o.histograms_conserved && conserved(syn_hist);
    }

    energy_wins += o.energy_nn <= o.energy_random;
    coverage_wins += o.coverage_after_nn <= o.coverage_after_random;
    intra_gaps += o.intra_synthetic_mean > o.intra_real_mean;
    report.histograms_conserved = report.histograms_conserved && o.histograms_conserved;
    report.runs.push_back(o);
  }
  if (!seeds.empty()) {
    const auto n = static_cast<double>(seeds.size());
    report.energy_win_rate = static_cast<double>(energy_wins) / n;
    report.coverage_win_rate = static_cast<double>(coverage_wins) / n;
    report.intra_gap_rate = static_cast<double>(intra_gaps) / n;
  }
  return report;
}

void write_report(std::ostream& out, const ExperimentReport& r) {
  out << "seeds = " << r.runs.size() << '\n'
      << "energy_win_rate = " << fmt(r.energy_win_rate) << '\n'
      << "coverage_win_rate = " << fmt(r.coverage_win_rate) << '\n'
      << "intra_gap_rate = " << fmt(r.intra_gap_rate) << '\n'
      << "histograms_conserved = " << (r.histograms_conserved ? "true" : "false") << '\n'
      << '\n'
      << "seed\tsynthetic\tenergy_nn\tenergy_random\tcoverage_before\tcoverage_after_nn\t"
         "coverage_after_random\tintra_real\tintra_synthetic\n";
  for (const auto& o : r.runs) {
    out << o.seed << '\t' << o.synthetic_count << '\t' << fmt(o.energy_nn) << '\t' << fmt(o.energy_random)
        << '\t' << fmt(o.coverage_before) << '\t' << fmt(o.coverage_after_nn) << '\t'
        << fmt(o.coverage_after_random) << '\t' << fmt(o.intra_real_mean) << '\t'
        << fmt(o.intra_synthetic_mean) << '\n';
  }
}

}  // namespace inside
