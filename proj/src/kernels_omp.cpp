#include <algorithm>
#include <cmath>
#include <limits>

#include "inside/embedding.hpp"
#include "inside/error.hpp"
#include "inside/kernels.hpp"

namespace inside::kernels {

namespace {

constexpr std::size_t kAnchorBlock = 32;
constexpr std::size_t kColumnBlock = 256;

bool closer(const RankedNeighbor& a, const RankedNeighbor& b) noexcept {
  return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

}  // namespace

NeighborLists rank_neighbors(const RowMatrix& points, std::size_t max_rank) {
  const std::size_t n = points.rows();
  if (max_rank >= n) {
    throw Error(ErrorKind::InvalidArgument, "max_rank must be smaller than the number of points");
  }
  NeighborLists out(n);
  const std::size_t blocks = (n + kAnchorBlock - 1) / kAnchorBlock;

#pragma omp parallel
  {
    std::vector<double> dist(kAnchorBlock * n);
    std::vector<RankedNeighbor> row;
    row.reserve(n);

#pragma omp for schedule(dynamic)
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      const std::size_t lo = blk * kAnchorBlock;
      const std::size_t hi = std::min(n, lo + kAnchorBlock);

      // Tile the anchor block against column blocks so the column rows stay
      // cache resident across anchors.
      for (std::size_t c0 = 0; c0 < n; c0 += kColumnBlock) {
        const std::size_t c1 = std::min(n, c0 + kColumnBlock);
        for (std::size_t i = lo; i < hi; ++i) {
          const auto a = points.row(i);
          double* drow = dist.data() + (i - lo) * n;
          for (std::size_t j = c0; j < c1; ++j) drow[j] = 1.0 - dot(a, points.row(j));
        }
      }

      for (std::size_t i = lo; i < hi; ++i) {
        const double* drow = dist.data() + (i - lo) * n;
        row.clear();
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) row.push_back({static_cast<std::uint32_t>(j), drow[j]});
        }
        const auto mid = row.begin() + static_cast<std::ptrdiff_t>(max_rank);
        std::partial_sort(row.begin(), mid, row.end(), closer);
        out[i].assign(row.begin(), mid);
      }
    }
  }
  return out;
}

namespace {

double euclid(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

// Row sums are reduced in a fixed order so the result does not depend on
// the thread count.
double mean_distance(const RowMatrix& a, const RowMatrix& b) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
  std::vector<double> sums(a.rows(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double s = 0.0;
    const auto ai = a.row(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < b.rows(); ++j) s += euclid(ai, b.row(j));
    sums[static_cast<std::size_t>(i)] = s;
  }
  double total = 0.0;
  for (double s : sums) total += s;
  return total / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

}  // namespace

double energy_distance(const RowMatrix& x, const RowMatrix& y) {
  if (x.rows() == 0 || y.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "energy distance needs two non-empty samples");
  }
  if (x.cols() != y.cols()) throw Error(ErrorKind::DimensionMismatch, "energy distance: dimensions differ");
  const double e = 2.0 * mean_distance(x, y) - mean_distance(x, x) - mean_distance(y, y);
  return std::max(0.0, e);
}

std::vector<double> nearest_distance(const RowMatrix& probes, const RowMatrix& bank) {
  if (probes.rows() > 0 && bank.rows() > 0 && probes.cols() != bank.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "nearest distance: dimensions differ");
  }
  const auto count = static_cast<std::ptrdiff_t>(probes.rows());
  std::vector<double> out(probes.rows(), std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < count; ++p) {
    const auto q = probes.row(static_cast<std::size_t>(p));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < bank.rows(); ++b) {
      best = std::min(best, std::clamp(1.0 - dot(q, bank.row(b)), 0.0, 2.0));
    }
    out[static_cast<std::size_t>(p)] = best;
  }
  return out;
}

}  // namespace inside::kernels
