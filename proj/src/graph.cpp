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

#include "odflow/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <string_view>
#include <utility>

#include "odflow/csv.hpp"
#include "odflow/error.hpp"

namespace odflow {

SpatialGraph SpatialGraph::from_records(std::vector<NodeRecord> nodes,
                                        std::span<const EdgeRecord> edges) {
  if (nodes.empty()) throw Error(ErrorCode::kEmptyInput, "graph has no nodes");

  std::sort(nodes.begin(), nodes.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });

  SpatialGraph g;
  g.ids_.reserve(nodes.size());
  g.positions_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && nodes[i].id == nodes[i - 1].id) {
      throw Error(ErrorCode::kIntegrity,
                  "duplicate node_id " + std::to_string(nodes[i].id));
    }
    g.ids_.push_back(nodes[i].id);
    g.positions_.push_back(nodes[i].position);
    g.index_.emplace(nodes[i].id, i);
  }

  std::map<std::pair<std::size_t, std::size_t>, double> unique;
  for (const EdgeRecord& e : edges) {
    const auto a = g.index_of(e.src);
    const auto b = g.index_of(e.dst);
    if (!a || !b) {
      throw Error(ErrorCode::kIntegrity,
                  "edge (" + std::to_string(e.src) + "," +
                      std::to_string(e.dst) + ") references unknown node " +
                      std::to_string(a ? e.dst : e.src));
    }
    if (!(e.length >= 0.0) || !std::isfinite(e.length)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(e.src) + "," +
                      std::to_string(e.dst) + ") has invalid length");
    }
    if (*a == *b) continue;
    const auto key = std::minmax(*a, *b);
    const double length = std::max(e.length, kMinEdgeLength);
    auto [it, inserted] = unique.emplace(key, length);
    if (!inserted) it->second = std::min(it->second, length);
  }

  g.edges_.reserve(unique.size());
  for (const auto& [key, length] : unique) {
    g.edges_.push_back(Edge{key.first, key.second, length});
  }
  return g;
}

std::optional<std::size_t> SpatialGraph::index_of(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SpatialGraph load_graph(std::istream& nodes, std::istream& edges,
                        const std::string& nodes_name,
                        const std::string& edges_name) {
  static constexpr std::array<std::string_view, 3> kNodeHeader{"node_id", "x",
                                                               "y"};
  static constexpr std::array<std::string_view, 3> kEdgeHeader{"src", "dst",
                                                               "length"};

  csv::Reader node_reader(nodes, nodes_name);
  node_reader.expect_header(kNodeHeader);
  std::vector<NodeRecord> node_records;
  std::vector<std::string> f;
  while (node_reader.next(f)) {
    node_records.push_back(
        NodeRecord{node_reader.to_int(f[0], "node_id"),
                   Point{node_reader.to_double(f[1], "x"),
                         node_reader.to_double(f[2], "y")}});
  }
  if (node_records.empty()) {
    throw Error(ErrorCode::kEmptyInput, nodes_name + ": no nodes");
  }

  std::vector<NodeId> known;
  known.reserve(node_records.size());
  for (const auto& r : node_records) known.push_back(r.id);
  std::sort(known.begin(), known.end());
  const auto exists = [&](NodeId id) {
    return std::binary_search(known.begin(), known.end(), id);
  };

  csv::Reader edge_reader(edges, edges_name);
  edge_reader.expect_header(kEdgeHeader);
  std::vector<EdgeRecord> edge_records;
  while (edge_reader.next(f)) {
    EdgeRecord e{edge_reader.to_int(f[0], "src"),
                 edge_reader.to_int(f[1], "dst"),
                 edge_reader.to_double(f[2], "length")};
    if (e.length < 0.0) edge_reader.fail("negative edge length");
    for (NodeId id : {e.src, e.dst}) {
      if (!exists(id)) {
        throw Error(ErrorCode::kIntegrity,
                    edges_name + ":" + std::to_string(edge_reader.line()) +
                        ": edge references unknown node " + std::to_string(id));
      }
    }
    edge_records.push_back(e);
  }

  return SpatialGraph::from_records(std::move(node_records), edge_records);
}

SpatialGraph load_graph(const std::filesystem::path& nodes_path,
                        const std::filesystem::path& edges_path) {
  std::ifstream nodes(nodes_path);
  if (!nodes) {
    throw Error(ErrorCode::kIo, "cannot open " + nodes_path.string());
  }
  std::ifstream edges(edges_path);
  if (!edges) {
    throw Error(ErrorCode::kIo, "cannot open " + edges_path.string());
  }
  return load_graph(nodes, edges, nodes_path.string(), edges_path.string());
}

void write_nodes(const SpatialGraph& g, std::ostream& out) {
  out << "node_id,x,y\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out << g.node_id(i) << ',' << csv::format_double(g.position(i).x) << ','
        << csv::format_double(g.position(i).y) << '\n';
  }
}

void write_edges(const SpatialGraph& g, std::ostream& out) {
  out << "src,dst,length\n";
  for (const Edge& e : g.edges()) {
    out << g.node_id(e.u) << ',' << g.node_id(e.v) << ','
        << csv::format_double(e.length) << '\n';
  }
}

double LaplacianMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

std::vector<double> LaplacianMatrix::to_dense() const {
  std::vector<double> dense(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      dense[i * n + col[k]] = val[k];
    }
  }
  return dense;
}

namespace {

// Assembles CSR from per-row (column, weight) neighbour lists, adding the
// diagonal as the sum of weights.
LaplacianMatrix assemble(
    std::vector<std::vector<std::pair<std::size_t, double>>>& rows) {
  LaplacianMatrix L;
  L.n = rows.size();
  L.row_ptr.assign(1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end());
    double diagonal = 0.0;
    for (const auto& [j, w] : row) diagonal += w;
    bool placed = diagonal == 0.0;
    for (const auto& [j, w] : row) {
      if (!placed && j > i) {
        L.col.push_back(i);
        L.val.push_back(diagonal);
        placed = true;
      }
      L.col.push_back(j);
      L.val.push_back(-w);
    }
    if (!placed) {
      L.col.push_back(i);
      L.val.push_back(diagonal);
    }
    L.row_ptr.push_back(L.col.size());
  }
  return L;
}

}  // namespace

LaplacianMatrix build_laplacian(const SpatialGraph& g) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(g.node_count());
  for (const Edge& e : g.edges()) {
    const double w = 1.0 / e.length;
    rows[e.u].emplace_back(e.v, w);
    rows[e.v].emplace_back(e.u, w);
  }
  return assemble(rows);
}

LaplacianMatrix induced_laplacian(const LaplacianMatrix& L,
                                  std::span<const std::size_t> indices) {
  std::unordered_map<std::size_t, std::size_t> local;
  local.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) local.emplace(indices[k], k);

  std::vector<std::vector<std::pair<std::size_t, double>>> rows(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    for (std::size_t p = L.row_ptr[i]; p < L.row_ptr[i + 1]; ++p) {
      if (L.col[p] == i) continue;
      const auto it = local.find(L.col[p]);
      if (it != local.end()) rows[k].emplace_back(it->second, -L.val[p]);
    }
  }
  return assemble(rows);
}

namespace {

std::vector<std::vector<std::size_t>> components_from_adjacency(
    std::size_t n, const std::vector<std::size_t>& row_ptr,
    const std::vector<std::size_t>& adj) {
  std::vector<std::size_t> label(n, n);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    const std::size_t c = comps.size();
    comps.emplace_back();
    label[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      comps[c].push_back(i);
      for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
        const std::size_t j = adj[p];
        if (label[j] == n) {
          label[j] = c;
          stack.push_back(j);
        }
      }
    }
    std::sort(comps[c].begin(), comps[c].end());
  }
  // Discovery order already yields ascending smallest members, so a stable
  // sort by size gives the tie rule for free.
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return comps;
}

}  // namespace

std::vector<std::vector<std::size_t>> component_indices(const SpatialGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> degree(n + 1, 0);
  for (const Edge& e : g.edges()) {
    ++degree[e.u + 1];
    ++degree[e.v + 1];
  }
  std::partial_sum(degree.begin(), degree.end(), degree.begin());
  std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
  std::vector<std::size_t> adj(2 * g.edge_count());
  for (const Edge& e : g.edges()) {
    adj[fill[e.u]++] = e.v;
    adj[fill[e.v]++] = e.u;
  }
  return components_from_adjacency(n, degree, adj);
}

std::vector<std::vector<std::size_t>> component_indices(
    const LaplacianMatrix& L) {
  return components_from_adjacency(L.n, L.row_ptr, L.col);
}

std::vector<std::vector<NodeId>> connected_components(const SpatialGraph& g) {
  std::vector<std::vector<NodeId>> out;
  for (const auto& comp : component_indices(g)) {
    std::vector<NodeId> ids;
    ids.reserve(comp.size());
    for (std::size_t i : comp) ids.push_back(g.node_id(i));
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace odflow
