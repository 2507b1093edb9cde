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

#include "odflow/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "odflow/csv.hpp"
#include "odflow/error.hpp"

namespace odflow {

namespace {

void require_connected(const LaplacianMatrix& L) {
  if (L.n < 2) throw Error(ErrorCode::kSingleton, "Fiedler vector needs n >= 2");
  if (component_indices(L).size() > 1) {
    throw Error(ErrorCode::kMultiplicity,
                "graph is disconnected: zero eigenvalue has multiplicity > 1; "
                "order each connected component separately");
  }
}

}  // namespace

FiedlerResult dense_fiedler(const LaplacianMatrix& L) {
  require_connected(L);
  const auto n = static_cast<Eigen::Index>(L.n);
  const std::vector<double> dense = L.to_dense();
  const Eigen::MatrixXd A =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>(dense.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kSolverConvergence,
                "dense eigendecomposition failed");
  }
  Eigen::VectorXd v = eig.eigenvectors().col(1);
  v.array() -= v.mean();
  v.normalize();

  FiedlerResult result;
  result.lambda2 = v.dot(A * v);
  result.v.assign(v.data(), v.data() + n);
  canonicalize_sign(result.v);
  return result;
}

FiedlerResult fiedler_vector(const LaplacianMatrix& L,
                             const SolverOptions& options) {
  switch (options.kind) {
    case SolverKind::kDense: return dense_fiedler(L);
    case SolverKind::kLanczos: return lanczos_fiedler(L, options);
    case SolverKind::kAuto: break;
  }
  if (L.n <= options.dense_limit) return dense_fiedler(L);
  return lanczos_fiedler(L, options);
}

void canonicalize_sign(std::span<double> v) {
  double max_abs = 0.0;
  for (double x : v) max_abs = std::max(max_abs, std::abs(x));
  if (max_abs == 0.0) return;
  const double cutoff = max_abs * (1.0 - 1e-9);
  for (double x : v) {
    if (std::abs(x) >= cutoff) {
      if (x < 0.0) {
        for (double& e : v) e = -e;
      }
      return;
    }
  }
}

std::vector<std::uint32_t> ranks_from_values(std::span<const double> values,
                                             std::span<const NodeId> ids) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return ids[a] < ids[b];
  });
  std::vector<std::uint32_t> rank(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    rank[order[k]] = static_cast<std::uint32_t>(k);
  }
  return rank;
}

double rayleigh_quotient(const LaplacianMatrix& L, std::span<const double> u) {
  if (u.size() != L.n) {
    throw Error(ErrorCode::kInvalidArgument, "vector length differs from n");
  }
  double norm2 = 0.0;
  for (double x : u) norm2 += x * x;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8) {
    throw Error(ErrorCode::kNormalization, "vector must have unit norm");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < L.n; ++i) {
    for (std::size_t k = L.row_ptr[i]; k < L.row_ptr[i + 1]; ++k) {
      const std::size_t j = L.col[k];
      if (j <= i) continue;
      const double d = u[i] - u[j];
      total += std::abs(L.val[k]) * d * d;
    }
  }
  return total;
}

std::optional<std::uint32_t> FiedlerOrdering::rank_of(NodeId id) const {
  const auto it = std::lower_bound(node_ids.begin(), node_ids.end(), id);
  if (it == node_ids.end() || *it != id) return std::nullopt;
  return rank[static_cast<std::size_t>(it - node_ids.begin())];
}

FiedlerOrdering order_nodes(const SpatialGraph& g, const LaplacianMatrix& L,
                            const SolverOptions& options) {
  const std::size_t n = g.node_count();
  FiedlerOrdering o;
  o.node_ids.assign(g.node_ids().begin(), g.node_ids().end());
  o.rank.assign(n, 0);
  o.component.assign(n, 0);
  o.fiedler_value.assign(n, 0.0);

  const auto comps = component_indices(g);
  o.components.resize(comps.size());
  std::uint32_t next_rank = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    o.components[c].members = comps[c];
    o.components[c].first_rank = next_rank;
    next_rank += static_cast<std::uint32_t>(comps[c].size());
  }

  std::vector<FiedlerResult> results(comps.size());
  std::vector<std::exception_ptr> failures(comps.size());
  const auto count = static_cast<std::int64_t>(comps.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < count; ++c) {
    const auto& members = comps[static_cast<std::size_t>(c)];
    if (members.size() < 2) continue;
    try {
      results[c] = fiedler_vector(induced_laplacian(L, members), options);
    } catch (...) {
      failures[c] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t c = 0; c < comps.size(); ++c) {
    auto& comp = o.components[c];
    std::vector<double> values(comp.members.size(), 0.0);
    if (comp.members.size() >= 2) {
      comp.lambda2 = results[c].lambda2;
      values = std::move(results[c].v);
    }
    std::vector<NodeId> ids;
    ids.reserve(comp.members.size());
    for (std::size_t i : comp.members) ids.push_back(g.node_id(i));
    const auto local = ranks_from_values(values, ids);
    for (std::size_t k = 0; k < comp.members.size(); ++k) {
      const std::size_t i = comp.members[k];
      o.rank[i] = comp.first_rank + local[k];
      o.component[i] = static_cast<std::uint32_t>(c);
      o.fiedler_value[i] = values[k];
    }
  }
  return o;
}

void write_ordering(const FiedlerOrdering& o, std::ostream& out) {
  out << "node_id,rank,component,fiedler_value\n";
  for (std::size_t i = 0; i < o.size(); ++i) {
    out << o.node_ids[i] << ',' << o.rank[i] << ',' << o.component[i] << ','
        << csv::format_double(o.fiedler_value[i]) << '\n';
  }
}

FiedlerOrdering read_ordering(std::istream& in, const SpatialGraph& g,
                              const std::string& name) {
  static constexpr std::array<std::string_view, 4> kHeader{
      "node_id", "rank", "component", "fiedler_value"};
  csv::Reader reader(in, name);
  reader.expect_header(kHeader);

  const std::size_t n = g.node_count();
  FiedlerOrdering o;
  o.node_ids.assign(g.node_ids().begin(), g.node_ids().end());
  o.rank.assign(n, 0);
  o.component.assign(n, 0);
  o.fiedler_value.assign(n, 0.0);
  std::vector<bool> seen_node(n, false);
  std::vector<bool> seen_rank(n, false);

  std::vector<std::string> f;
  while (reader.next(f)) {
    const NodeId id = reader.to_int(f[0], "node_id");
    const auto index = g.index_of(id);
    if (!index) {
      throw Error(ErrorCode::kIntegrity, name + ":" +
                                             std::to_string(reader.line()) +
                                             ": unknown node " +
                                             std::to_string(id));
    }
    if (seen_node[*index]) reader.fail("duplicate node " + std::to_string(id));
    const std::int64_t rank = reader.to_int(f[1], "rank");
    const std::int64_t comp = reader.to_int(f[2], "component");
    if (rank < 0 || rank >= static_cast<std::int64_t>(n) ||
        seen_rank[static_cast<std::size_t>(rank)]) {
      reader.fail("rank " + std::to_string(rank) + " is out of range or repeated");
    }
    if (comp < 0 || comp >= static_cast<std::int64_t>(n)) {
      reader.fail("component out of range");
    }
    seen_node[*index] = true;
    seen_rank[static_cast<std::size_t>(rank)] = true;
    o.rank[*index] = static_cast<std::uint32_t>(rank);
    o.component[*index] = static_cast<std::uint32_t>(comp);
    o.fiedler_value[*index] = reader.to_double(f[3], "fiedler_value");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen_node[i]) {
      throw Error(ErrorCode::kIntegrity,
                  name + ": missing node " + std::to_string(g.node_id(i)));
    }
  }

  std::map<std::uint32_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[o.component[i]].push_back(i);
  std::uint32_t expected = 0;
  for (const auto& [c, members] : groups) {
    if (c != expected++) {
      throw Error(ErrorCode::kIntegrity, name + ": component ids not dense");
    }
    std::uint32_t lo = static_cast<std::uint32_t>(n);
    std::uint32_t hi = 0;
    for (std::size_t i : members) {
      lo = std::min(lo, o.rank[i]);
      hi = std::max(hi, o.rank[i]);
    }
    if (hi - lo + 1 != members.size()) {
      throw Error(ErrorCode::kIntegrity,
                  name + ": component " + std::to_string(c) +
                      " does not occupy a contiguous rank range");
    }
    o.components.push_back(ComponentOrdering{members, lo, std::nullopt});
  }
  return o;
}

}  // namespace odflow
