/*
 * Copyright 2026 The odflow Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <cstdint>

#include <omp.h>

#include "odflow/kernels.hpp"

namespace odflow::kernels::parallel {

namespace {
// Below this many elements the fork/join cost dominates.
constexpr std::int64_t kMinParallel = 4096;
}  // namespace

void spmv(const LaplacianMatrix& L, std::span<const double> x,
          std::span<double> y) {
  const auto n = static_cast<std::int64_t>(L.n);
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = L.row_ptr[i]; k < L.row_ptr[i + 1]; ++k) {
      acc += L.val[k] * x[L.col[k]];
    }
    y[i] = acc;
  }
}

std::vector<std::size_t> select_rows(std::span<const OdPoint> points,
                                     std::span<const std::uint8_t> labels,
                                     const Selection& s) {
  const auto n = static_cast<std::int64_t>(points.size());
  std::vector<std::uint8_t> mask(points.size(), 0);
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::int64_t i = 0; i < n; ++i) {
    mask[i] = passes(s.class_filter, labels[i]) &&
              contains(s.shape, points[i].x, points[i].y);
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) rows.push_back(i);
  }
  return rows;
}

std::vector<std::uint64_t> bin_counts(std::span<const OdPoint> points,
                                      std::span<const std::uint8_t> labels,
                                      ClassFilter filter, std::size_t n,
                                      std::size_t bins) {
  std::vector<std::uint64_t> cells(bins * bins, 0);
  const auto count = static_cast<std::int64_t>(points.size());
#pragma omp parallel if (count >= kMinParallel)
  {
    std::vector<std::uint64_t> local(bins * bins, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < count; ++i) {
      if (!passes(filter, labels[i])) continue;
      const std::size_t col = bin_of(points[i].x, bins, n);
      const std::size_t row = bin_of(points[i].y, bins, n);
      ++local[row * bins + col];
    }
#pragma omp critical
    for (std::size_t k = 0; k < cells.size(); ++k) cells[k] += local[k];
  }
  return cells;
}

ClassAbsSums class_abs_sums(std::span<const double> phi, std::size_t m,
                            std::span<const std::size_t> rows,
                            std::span<const std::uint8_t> group) {
  ClassAbsSums out;
  out.sums[0].assign(m, 0.0);
  out.sums[1].assign(m, 0.0);
  for (std::size_t r : rows) ++out.counts[group[r]];

  // One feature per iteration so each sum accumulates rows in the same order
  // as the serial kernel.
  const auto features = static_cast<std::int64_t>(m);
  const auto work = features * static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static) if (work >= kMinParallel)
  for (std::int64_t f = 0; f < features; ++f) {
    double acc[2] = {0.0, 0.0};
    for (std::size_t r : rows) {
      acc[group[r]] += std::abs(phi[r * m + static_cast<std::size_t>(f)]);
    }
    out.sums[0][f] = acc[0];
    out.sums[1][f] = acc[1];
  }
  return out;
}

}  // namespace odflow::kernels::parallel
