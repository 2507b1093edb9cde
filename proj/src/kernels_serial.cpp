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

#include "odflow/kernels.hpp"

namespace odflow::kernels::serial {

void spmv(const LaplacianMatrix& L, std::span<const double> x,
          std::span<double> y) {
  for (std::size_t i = 0; i < L.n; ++i) {
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
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (passes(s.class_filter, labels[i]) &&
        contains(s.shape, points[i].x, points[i].y)) {
      rows.push_back(i);
    }
  }
  return rows;
}

std::vector<std::uint64_t> bin_counts(std::span<const OdPoint> points,
                                      std::span<const std::uint8_t> labels,
                                      ClassFilter filter, std::size_t n,
                                      std::size_t bins) {
  std::vector<std::uint64_t> cells(bins * bins, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!passes(filter, labels[i])) continue;
    const std::size_t col = bin_of(points[i].x, bins, n);
    const std::size_t row = bin_of(points[i].y, bins, n);
    ++cells[row * bins + col];
  }
  return cells;
}

ClassAbsSums class_abs_sums(std::span<const double> phi, std::size_t m,
                            std::span<const std::size_t> rows,
                            std::span<const std::uint8_t> group) {
  ClassAbsSums out;
  out.sums[0].assign(m, 0.0);
  out.sums[1].assign(m, 0.0);
  for (std::size_t r : rows) {
    const std::uint8_t c = group[r];
    ++out.counts[c];
    for (std::size_t f = 0; f < m; ++f) {
      out.sums[c][f] += std::abs(phi[r * m + f]);
    }
  }
  return out;
}

}  // namespace odflow::kernels::serial
