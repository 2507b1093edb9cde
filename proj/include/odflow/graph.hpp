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

#ifndef ODFLOW_GRAPH_HPP_
#define ODFLOW_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace odflow {

using NodeId = std::int64_t;

// Edge lengths shorter than this (in dataset units) are clamped up to it so
// that the 1/length weights stay finite.
inline constexpr double kMinEdgeLength = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct NodeRecord {
  NodeId id = 0;
  Point position;
};

struct EdgeRecord {
  NodeId src = 0;
  NodeId dst = 0;
  double length = 1.0;
};

// Undirected edge between dense node indices, u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 1.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Planar graph with physical edge lengths. Nodes are stored sorted by id, so
// the dense index order is the node-id order. Edges are deduplicated, free of
// self-loops, sorted by (u, v) and have length >= kMinEdgeLength.
class SpatialGraph {
 public:
  SpatialGraph() = default;

  // Validates and normalizes raw records: duplicate undirected edges keep the
  // minimum length, self-loops are dropped, short lengths are clamped.
  // Throws Error(kEmptyInput) for no nodes, Error(kIntegrity) for duplicate
  // node ids or edges naming unknown nodes.
  static SpatialGraph from_records(std::vector<NodeRecord> nodes,
                                   std::span<const EdgeRecord> edges);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  NodeId node_id(std::size_t index) const { return ids_[index]; }
  const Point& position(std::size_t index) const { return positions_[index]; }
  std::span<const NodeId> node_ids() const { return ids_; }
  std::span<const Point> positions() const { return positions_; }
  std::span<const Edge> edges() const { return edges_; }

  std::optional<std::size_t> index_of(NodeId id) const;

  friend bool operator==(const SpatialGraph& a, const SpatialGraph& b) {
    return a.ids_ == b.ids_ && a.positions_ == b.positions_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::vector<NodeId> ids_;
  std::vector<Point> positions_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
};

// Parses `node_id,x,y` and `src,dst,length` CSV streams.
SpatialGraph load_graph(std::istream& nodes, std::istream& edges,
                        const std::string& nodes_name = "nodes.csv",
                        const std::string& edges_name = "edges.csv");
SpatialGraph load_graph(const std::filesystem::path& nodes_path,
                        const std::filesystem::path& edges_path);

void write_nodes(const SpatialGraph& g, std::ostream& out);
void write_edges(const SpatialGraph& g, std::ostream& out);

// Sparse symmetric Laplacian in CSR form. Off-diagonal entries are -1/length,
// the diagonal is the sum of absolute off-diagonal entries of the row. Zero
// entries (the diagonal of an isolated node) are not stored. Column indices
// are ascending within each row.
struct LaplacianMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> val;

  double at(std::size_t i, std::size_t j) const;
  std::size_t nonzeros() const { return val.size(); }

  // Row-major dense copy; used by the dense solver and tests.
  std::vector<double> to_dense() const;
};

LaplacianMatrix build_laplacian(const SpatialGraph& g);

// Laplacian of the subgraph induced by `indices` (ascending dense indices of
// `L`), reindexed 0..k-1 in the given order.
LaplacianMatrix induced_laplacian(const LaplacianMatrix& L,
                                  std::span<const std::size_t> indices);

// Connected components as ascending dense-index lists, ordered by size
// descending and then by smallest member.
std::vector<std::vector<std::size_t>> component_indices(const SpatialGraph& g);
std::vector<std::vector<std::size_t>> component_indices(
    const LaplacianMatrix& L);

// Same partition expressed in node ids.
std::vector<std::vector<NodeId>> connected_components(const SpatialGraph& g);

}  // namespace odflow

#endif  // ODFLOW_GRAPH_HPP_
