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

// Seeded generator for demo and test bundles. Trips are drawn directly in
// OD-plot rank space so each pattern lands where it is meant to:
//   diagonal    |origin rank - dest rank| <= 2% of n
//   vertical    origin rank inside one band of width <= 5% of n
//   horizontal  dest rank inside one band of width <= 5% of n
//   cluster     origin band and dest band far apart
// Labels come from a noisy linear score over six trip features; the
// prediction is the noise-free score and the attributions are that linear
// model's exact Shapley values.

#ifndef ODFLOW_SYNTH_HPP_
#define ODFLOW_SYNTH_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "odflow/bundle.hpp"

namespace odflow {

enum class GraphKind { kPath, kGrid, kRandomPlanar };

enum Pattern : std::size_t {
  kDiagonal = 0,
  kVertical = 1,
  kHorizontal = 2,
  kCluster = 3,
};

struct SyntheticSpec {
  GraphKind graph = GraphKind::kRandomPlanar;
  std::size_t nodes = 302;  // path and random-planar
  std::size_t width = 15;   // grid
  std::size_t height = 15;  // grid
  std::size_t trips = 5000;
  std::array<double, 4> mix{0.55, 0.15, 0.15, 0.15};  // by Pattern
  double class1_fraction = 0.1;
  std::uint64_t seed = 1;
  double extent = 1000.0;  // side of the random-planar square
};

// Parses "path:N", "grid:WxH" or "random-planar:N" into `spec`.
void parse_graph_kind(std::string_view text, SyntheticSpec& spec);

// Throws Error(kInvalidArgument) on an unusable spec.
void validate(const SyntheticSpec& spec);

// Path and grid graphs have unit spacing; random-planar is a Gabriel graph
// of uniform points, patched to be connected by shortest bridging edges.
SpatialGraph synth_graph(const SyntheticSpec& spec);

// Band width used by the vertical, horizontal and cluster patterns.
std::size_t pattern_band_width(std::size_t n);

DatasetBundle synthesize(const SyntheticSpec& spec,
                         const SolverOptions& options = {});

}  // namespace odflow

#endif  // ODFLOW_SYNTH_HPP_
