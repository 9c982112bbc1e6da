#include "inside/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "inside/error.hpp"
#include "inside/random.hpp"

namespace inside {

std::string_view to_string(PointKind k) noexcept { return k == PointKind::Real ? "real" : "synthetic"; }

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vector signed_axis(const Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    if (std::abs(v[k]) > std::abs(v[arg])) arg = k;
  }
  const double sign = v[arg] < 0.0 ? -1.0 : 1.0;
  Vector out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) out[static_cast<std::size_t>(k)] = sign * v[k];
  return out;
}

double cosine_similarity(const Vector& a, const Vector& b) {
  const double denom = std::sqrt(dot(a, a) * dot(b, b));
  if (denom == 0.0) return 0.0;
  return std::clamp(dot(a, b) / denom, -1.0, 1.0);
}

}  // namespace

ProjectionResult project_2d(const EmbeddingSet& real, std::span<const SyntheticIdentity> synthetic) {
  const std::size_t n = real.size();
  if (n < 3) {
    throw Error(ErrorKind::DegenerateCovariance,
                "projection needs at least 3 real points spanning two directions, got " + std::to_string(n));
  }
  const auto dim = static_cast<Eigen::Index>(real.dimension());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), dim);
  for (std::size_t i = 0; i < n; ++i) {
    x.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(real[i].vector.data(), dim);
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateCovariance, "covariance eigendecomposition failed");
  }
  const auto& values = solver.eigenvalues();  // ascending
  const double top = values[dim - 1];
  const double second = dim >= 2 ? values[dim - 2] : 0.0;
  if (!(top > 0.0) || second <= 1e-12 * std::max(top, 1.0)) {
    throw Error(ErrorKind::DegenerateCovariance, "real points span fewer than two directions");
  }

  ProjectionResult out;
  out.axis_x = signed_axis(solver.eigenvectors().col(dim - 1));
  out.axis_y = signed_axis(solver.eigenvectors().col(dim - 2));
  out.points.reserve(n + synthetic.size());
  for (const auto& e : real.records()) {
    out.points.push_back({e.id, PointKind::Real, dot(e.vector, out.axis_x), dot(e.vector, out.axis_y)});
  }
  for (const auto& s : synthetic) {
    if (s.vector.size() != real.dimension()) {
      throw Error(ErrorKind::DimensionMismatch, "synthetic identity '" + s.id + "' has the wrong dimension");
    }
    out.points.push_back({s.id, PointKind::Synthetic, dot(s.vector, out.axis_x), dot(s.vector, out.axis_y)});
  }
  return out;
}

SimilarityHistogram intra_class_similarity(const UtteranceGroups& groups,
                                           std::size_t max_pairs_per_identity, std::uint64_t seed,
                                           std::size_t bins) {
  if (bins < 2) throw Error(ErrorKind::InvalidArgument, "histogram needs at least 2 bins");
  if (max_pairs_per_identity == 0) throw Error(ErrorKind::InvalidArgument, "max_pairs_per_identity must be positive");

  std::vector<const std::string*> ids;
  std::vector<const std::vector<Vector>*> members;
  std::string too_small;
  for (const auto& [id, vecs] : groups) {
    if (vecs.size() < 2) too_small += (too_small.empty() ? "" : ", ") + id;
    ids.push_back(&id);
    members.push_back(&vecs);
  }
  if (!too_small.empty()) {
    throw Error(ErrorKind::GroupTooSmall, "identities with fewer than 2 utterances: " + too_small);
  }

  std::vector<std::vector<double>> scores(ids.size());
  const auto count = static_cast<std::ptrdiff_t>(ids.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t g = 0; g < count; ++g) {
    const auto& vecs = *members[static_cast<std::size_t>(g)];
    const std::uint64_t m = vecs.size();
    const std::uint64_t total = m * (m - 1) / 2;
    auto& out = scores[static_cast<std::size_t>(g)];
    if (total <= max_pairs_per_identity) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) out.push_back(cosine_similarity(vecs[i], vecs[j]));
      continue;
    }
    Rng rng(derive_seed(seed, *ids[static_cast<std::size_t>(g)]));
    auto picks = sample_indices(total, max_pairs_per_identity, rng);
    std::sort(picks.begin(), picks.end());
    // Walk the upper triangle once; picks are sorted so a single cursor works.
    std::size_t cursor = 0;
    std::uint64_t base = 0;
    for (std::size_t i = 0; i < m && cursor < picks.size(); ++i) {
      const std::uint64_t row = m - 1 - i;
      while (cursor < picks.size() && picks[cursor] < base + row) {
        const std::size_t j = i + 1 + static_cast<std::size_t>(picks[cursor] - base);
        out.push_back(cosine_similarity(vecs[i], vecs[j]));
        ++cursor;
      }
      base += row;
    }
  }

  SimilarityHistogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    h.bin_edges[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(bins);
  }
  h.bin_edges.back() = 1.0;
  h.counts.assign(bins, 0);
  double sum = 0.0;
  for (const auto& per_identity : scores) {
    for (double s : per_identity) {
      auto bin = static_cast<std::size_t>(std::floor((s + 1.0) / 2.0 * static_cast<double>(bins)));
      ++h.counts[std::min(bin, bins - 1)];
      sum += s;
      ++h.sample_count;
    }
  }
  h.mean = h.sample_count == 0 ? std::numeric_limits<double>::quiet_NaN()
                               : sum / static_cast<double>(h.sample_count);
  return h;
}

RowMatrix sample_probes(const EmbeddingSet& real, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "probe count must be at least 1");
  std::vector<std::size_t> eligible;
  for (Gender g : kGenders) {
    if (real.group(g).size() >= 2) eligible.insert(eligible.end(), real.group(g).begin(), real.group(g).end());
  }
  if (eligible.empty()) {
    throw Error(ErrorKind::GroupTooSmall, "probes need a gender group with at least two identities");
  }
  RowMatrix probes(count, real.dimension());
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t p = 0; p < count; ++p) {
    for (;;) {
      const auto& anchor = real[eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)]];
      const auto grp = real.group(anchor.gender);
      std::size_t partner = grp[std::uniform_int_distribution<std::size_t>(0, grp.size() - 2)(rng)];
      if (real[partner].id == anchor.id) partner = grp.back();
      const double alpha = unit(rng);
      try {
        const Vector v = slerp(anchor.vector, real[partner].vector, InterpolationCoefficient(alpha));
        std::copy(v.begin(), v.end(), probes.row(p).begin());
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::AntipodalPair) throw;
      }
    }
  }
  return probes;
}

CoverageReport coverage_with_probes(const EmbeddingSet& real,
                                    std::span<const SyntheticIdentity> synthetic,
                                    const RowMatrix& probes) {
  if (real.empty()) throw Error(ErrorKind::InvalidArgument, "coverage needs a non-empty real set");
  RowMatrix real_bank(real.size(), real.dimension());
  for (std::size_t i = 0; i < real.size(); ++i) {
    std::copy(real[i].vector.begin(), real[i].vector.end(), real_bank.row(i).begin());
  }
  RowMatrix syn_bank(synthetic.size(), real.dimension());
  for (std::size_t i = 0; i < synthetic.size(); ++i) {
    if (synthetic[i].vector.size() != real.dimension()) {
      throw Error(ErrorKind::DimensionMismatch, "synthetic identity '" + synthetic[i].id + "' has the wrong dimension");
    }
    std::copy(synthetic[i].vector.begin(), synthetic[i].vector.end(), syn_bank.row(i).begin());
  }

  const auto before = kernels::nearest_distance(probes, real_bank);
  const auto to_syn = kernels::nearest_distance(probes, syn_bank);

  CoverageReport r;
  r.probe_count = probes.rows();
  double sb = 0.0, sa = 0.0;
  for (std::size_t p = 0; p < probes.rows(); ++p) {
    sb += before[p];
    sa += std::min(before[p], to_syn[p]);
  }
  r.mean_before = sb / static_cast<double>(r.probe_count);
  r.mean_after = sa / static_cast<double>(r.probe_count);
  return r;
}

CoverageReport coverage_gain(const EmbeddingSet& real, std::span<const SyntheticIdentity> synthetic,
                             std::size_t probe_count, std::uint64_t seed) {
  return coverage_with_probes(real, synthetic, sample_probes(real, probe_count, seed));
}

void write_projection(std::ostream& out, const ProjectionResult& projection) {
  out << "id\tkind\tx\ty\n";
  for (const auto& p : projection.points) {
    out << p.id << '\t' << to_string(p.kind) << '\t' << fmt(p.x) << '\t' << fmt(p.y) << '\n';
  }
}

void write_histogram(std::ostream& out, const SimilarityHistogram& h) {
  out << "bin_lo\tbin_hi\tcount\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << fmt(h.bin_edges[k]) << '\t' << fmt(h.bin_edges[k + 1]) << '\t' << h.counts[k] << '\n';
  }
}

void write_coverage(std::ostream& out, const CoverageReport& r) {
  out << "probe_count = " << r.probe_count << '\n'
      << "mean_nearest_distance_before = " << fmt(r.mean_before) << '\n'
      << "mean_nearest_distance_after = " << fmt(r.mean_after) << '\n'
      << "improvement = " << fmt(r.mean_before - r.mean_after) << '\n';
}

}  // namespace inside
