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

#ifndef ODFLOW_SPECTRAL_HPP_
#define ODFLOW_SPECTRAL_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "odflow/graph.hpp"

namespace odflow {

// Smallest non-zero eigenpair of a connected graph's Laplacian. `v` is a unit
// vector orthogonal to the constant vector, sign-canonicalized so that its
// largest-magnitude entry is positive.
struct FiedlerResult {
  double lambda2 = 0.0;
  std::vector<double> v;
};

enum class SolverKind {
  kAuto,     // dense up to dense_limit nodes, Lanczos above
  kDense,
  kLanczos,
};

struct SolverOptions {
  SolverKind kind = SolverKind::kAuto;
  std::size_t dense_limit = 2000;
  // Lanczos stops once ||Lv - lambda v|| <= tolerance * max(1, lambda), or at
  // the floating-point floor of the operator norm if that is larger.
  double tolerance = 1e-10;
  std::size_t max_basis = 160;
  std::size_t keep = 60;
  std::size_t iterations_per_node = 50;
  std::uint64_t seed = 0x0df10a5eedULL;
};

// Residual bound every returned FiedlerResult satisfies.
inline constexpr double kFiedlerResidualBound = 1e-8;

// Throws Error(kMultiplicity) when L is disconnected, Error(kSingleton) for
// n == 1, Error(kSolverConvergence) if Lanczos exhausts its iteration cap.
FiedlerResult fiedler_vector(const LaplacianMatrix& L,
                             const SolverOptions& options = {});

// Direct entry points for the two solver routes.
FiedlerResult dense_fiedler(const LaplacianMatrix& L);
FiedlerResult lanczos_fiedler(const LaplacianMatrix& L,
                              const SolverOptions& options = {});

// Flips `v` so that its largest-magnitude entry is positive. Entries within
// a relative 1e-9 of the maximum magnitude count as tied; the lowest index
// among them decides.
void canonicalize_sign(std::span<double> v);

// rank[i] for each entry: ascending value, ties by ascending id.
std::vector<std::uint32_t> ranks_from_values(std::span<const double> values,
                                             std::span<const NodeId> ids);

// Sum over edges of |L_ij| (u_i - u_j)^2, i.e. u^T L u. Throws
// Error(kNormalization) unless | ||u|| - 1 | <= 1e-8.
double rayleigh_quotient(const LaplacianMatrix& L, std::span<const double> u);

struct ComponentOrdering {
  std::vector<std::size_t> members;  // ascending dense indices
  std::uint32_t first_rank = 0;
  // Absent for singletons and for orderings loaded from disk.
  std::optional<double> lambda2;
};

// Node ranks for OD-plot axes. Arrays are indexed by the graph's dense node
// index (ascending node id). Components take contiguous rank ranges in
// size-descending order.
struct FiedlerOrdering {
  std::vector<NodeId> node_ids;
  std::vector<std::uint32_t> rank;
  std::vector<std::uint32_t> component;
  std::vector<double> fiedler_value;
  std::vector<ComponentOrdering> components;

  std::size_t size() const { return node_ids.size(); }
  std::optional<std::uint32_t> rank_of(NodeId id) const;
};

// Never fails on a validated graph; per-component eigenproblems run in
// parallel.
FiedlerOrdering order_nodes(const SpatialGraph& g, const LaplacianMatrix& L,
                            const SolverOptions& options = {});

// `node_id,rank,component,fiedler_value`, one row per node in id order.
void write_ordering(const FiedlerOrdering& o, std::ostream& out);

// Reads an ordering file and checks it against `g`: one row per graph node,
// ranks a bijection onto 0..n-1, each component a contiguous rank range.
FiedlerOrdering read_ordering(std::istream& in, const SpatialGraph& g,
                              const std::string& name = "ordering.csv");

}  // namespace odflow

#endif  // ODFLOW_SPECTRAL_HPP_
