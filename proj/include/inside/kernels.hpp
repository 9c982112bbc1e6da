#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP implementation in
// `inside::kernels` and a plain serial reference in `inside::kernels::serial`
// that tests compare against and the benchmark races.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace inside {

// Dense row-major matrix of doubles.
class RowMatrix {
 public:
  RowMatrix() = default;
  RowMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct RankedNeighbor {
  std::uint32_t index;
  double distance;

  friend bool operator==(const RankedNeighbor&, const RankedNeighbor&) = default;
};

using NeighborLists = std::vector<std::vector<RankedNeighbor>>;

namespace kernels {

// For every row, its `max_rank` nearest other rows by cosine distance
// (rows assumed unit norm), ascending; equal distances are ordered by row
// index. Requires max_rank < rows.
NeighborLists rank_neighbors(const RowMatrix& points, std::size_t max_rank);

// V-statistic energy distance 2E|X-Y| - E|X-X'| - E|Y-Y'| with Euclidean
// norm. Clamped at zero. Both samples must be non-empty.
double energy_distance(const RowMatrix& x, const RowMatrix& y);

// Cosine distance from each probe to its nearest bank row.
std::vector<double> nearest_distance(const RowMatrix& probes, const RowMatrix& bank);

namespace serial {

NeighborLists rank_neighbors(const RowMatrix& points, std::size_t max_rank);
double energy_distance(const RowMatrix& x, const RowMatrix& y);
std::vector<double> nearest_distance(const RowMatrix& probes, const RowMatrix& bank);

}  // namespace serial
}  // namespace kernels
}  // namespace inside
