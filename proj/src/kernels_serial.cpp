#include <algorithm>
#include <cmath>
#include <limits>

#include "inside/embedding.hpp"
#include "inside/error.hpp"
#include "inside/kernels.hpp"

namespace inside::kernels::serial {

NeighborLists rank_neighbors(const RowMatrix& points, std::size_t max_rank) {
  const std::size_t n = points.rows();
  if (max_rank >= n) {
    throw Error(ErrorKind::InvalidArgument, "max_rank must be smaller than the number of points");
  }
  NeighborLists out(n);
  std::vector<RankedNeighbor> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      row.push_back({static_cast<std::uint32_t>(j), 1.0 - dot(points.row(i), points.row(j))});
    }
    std::sort(row.begin(), row.end(), [](const RankedNeighbor& a, const RankedNeighbor& b) {
      return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    });
    out[i].assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(max_rank));
  }
  return out;
}

namespace {

double euclid(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double mean_distance(const RowMatrix& a, const RowMatrix& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) total += euclid(a.row(i), b.row(j));
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
  std::vector<double> out(probes.rows(), std::numeric_limits<double>::infinity());
  for (std::size_t p = 0; p < probes.rows(); ++p) {
    for (std::size_t b = 0; b < bank.rows(); ++b) {
      const double d = std::clamp(1.0 - dot(probes.row(p), bank.row(b)), 0.0, 2.0);
      out[p] = std::min(out[p], d);
    }
  }
  return out;
}

}  // namespace inside::kernels::serial
