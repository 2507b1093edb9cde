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

// Data-parallel inner loops. Every kernel exists twice with the same
// signature: `serial` is the plain reference kept for tests and benchmarks,
// `parallel` is the OpenMP version used by the library. Both produce
// bit-identical results; floating-point reductions keep the serial summation
// order per output element.

#ifndef ODFLOW_KERNELS_HPP_
#define ODFLOW_KERNELS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "odflow/graph.hpp"
#include "odflow/selection.hpp"

namespace odflow::kernels {

// floor(rank * bins / n) without overflow for n, bins < 2^32.
inline std::size_t bin_of(std::uint32_t rank, std::size_t bins, std::size_t n) {
  return static_cast<std::size_t>(static_cast<std::uint64_t>(rank) * bins / n);
}

struct ClassAbsSums {
  // sums[c][f] = sum over rows in class c of |phi(row, f)|.
  std::array<std::vector<double>, 2> sums;
  std::array<std::size_t, 2> counts{0, 0};
};

namespace serial {

void spmv(const LaplacianMatrix& L, std::span<const double> x,
          std::span<double> y);

// Indices (ascending) of points inside the shape whose label passes the
// selection's class filter.
std::vector<std::size_t> select_rows(std::span<const OdPoint> points,
                                     std::span<const std::uint8_t> labels,
                                     const Selection& s);

// Row-major bins x bins counts; row = destination bin, column = origin bin.
std::vector<std::uint64_t> bin_counts(std::span<const OdPoint> points,
                                      std::span<const std::uint8_t> labels,
                                      ClassFilter filter, std::size_t n,
                                      std::size_t bins);

// `phi` is row-major with m columns; `group` gives the class of every row.
ClassAbsSums class_abs_sums(std::span<const double> phi, std::size_t m,
                            std::span<const std::size_t> rows,
                            std::span<const std::uint8_t> group);

}  // namespace serial

namespace parallel {

void spmv(const LaplacianMatrix& L, std::span<const double> x,
          std::span<double> y);

std::vector<std::size_t> select_rows(std::span<const OdPoint> points,
                                     std::span<const std::uint8_t> labels,
                                     const Selection& s);

std::vector<std::uint64_t> bin_counts(std::span<const OdPoint> points,
                                      std::span<const std::uint8_t> labels,
                                      ClassFilter filter, std::size_t n,
                                      std::size_t bins);

ClassAbsSums class_abs_sums(std::span<const double> phi, std::size_t m,
                            std::span<const std::size_t> rows,
                            std::span<const std::uint8_t> group);

}  // namespace parallel

}  // namespace odflow::kernels

#endif  // ODFLOW_KERNELS_HPP_
