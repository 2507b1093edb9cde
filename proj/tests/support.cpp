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

#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace odflow::testing {

SpatialGraph path_graph(std::size_t n, double length) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back({static_cast<NodeId>(i), {static_cast<double>(i) * length, 0.0}});
    if (i > 0) edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(i), length});
  }
  return SpatialGraph::from_records(std::move(nodes), edges);
}

SpatialGraph random_connected_graph(Rng& rng, std::size_t n, std::size_t extra,
                                    double min_length, double max_length) {
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_real_distribution<double> len(min_length, max_length);
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back({static_cast<NodeId>(3 * i + 7), {coord(rng), coord(rng)}});
  }
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    edges.push_back({nodes[i].id, nodes[j].id, len(rng)});
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < extra && n > 1; ++k) {
    edges.push_back({nodes[pick(rng)].id, nodes[pick(rng)].id, len(rng)});
  }
  std::shuffle(nodes.begin(), nodes.end(), rng);
  return SpatialGraph::from_records(std::move(nodes), edges);
}

Eigen::MatrixXd dense_laplacian(const SpatialGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const double w = 1.0 / e.length;
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    L(u, v) -= w;
    L(v, u) -= w;
    L(u, u) += w;
    L(v, v) += w;
  }
  return L;
}

EigenOracle eigen_oracle(const SpatialGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_laplacian(g));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<std::uint32_t> oracle_ranks(const std::vector<double>& values,
                                        std::span<const NodeId> ids) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return ids[a] < ids[b];
  });
  std::vector<std::uint32_t> rank(values.size());
  for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = static_cast<std::uint32_t>(r);
  return rank;
}

bool same_or_reversed(const std::vector<std::uint32_t>& a,
                      const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return false;
  if (a == b) return true;
  const auto last = static_cast<std::uint32_t>(a.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != last - b[i]) return false;
  }
  return true;
}

std::vector<double> random_unit_perp(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> u(n);
  for (double& x : u) x = normal(rng);
  const double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(n);
  double norm = 0.0;
  for (double& x : u) {
    x -= mean;
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : u) x /= norm;
  return u;
}

DatasetBundle random_bundle(Rng& rng, const BundleShape& shape, std::string id) {
  SpatialGraph g = random_connected_graph(rng, shape.nodes, shape.extra_edges);
  const auto ids = g.node_ids();
  std::uniform_int_distribution<std::size_t> node(0, shape.nodes - 1);
  std::bernoulli_distribution positive(shape.class1_fraction);
  std::bernoulli_distribution wrong(0.25);
  std::bernoulli_distribution self_trip(0.05);

  std::vector<Trip> trips;
  for (std::size_t k = shape.trips; k-- > 0;) {
    Trip t;
    t.id = static_cast<TripId>(1000 + 7 * k);
    t.origin = ids[node(rng)];
    t.dest = self_trip(rng) ? t.origin : ids[node(rng)];
    t.label = positive(rng) ? 1 : 0;
    t.predicted = wrong(rng) ? 1 - t.label : t.label;
    trips.push_back(t);
  }

  static const std::vector<std::string> kWords{"alpha", "beta", "delta", "gamma"};
  std::vector<FeatureColumn> columns;
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  std::uniform_int_distribution<int> small(0, 5);
  for (std::size_t f = 0; f < shape.continuous; ++f) {
    std::vector<double> v(shape.trips);
    for (double& x : v) x = f % 2 == 0 ? value(rng) : static_cast<double>(small(rng));
    columns.push_back(FeatureColumn::continuous("c" + std::to_string(f), std::move(v)));
  }
  for (std::size_t f = 0; f < shape.discrete; ++f) {
    std::uniform_int_distribution<std::size_t> word(0, 1 + f % 3);
    std::vector<std::string> v(shape.trips);
    for (auto& s : v) s = kWords[word(rng)];
    columns.push_back(FeatureColumn::discrete("d" + std::to_string(f), v));
  }

  TripTable table(std::move(trips), std::move(columns));
  const std::size_t m = shape.continuous + shape.discrete;
  std::vector<double> phi(table.size() * m);
  std::uniform_real_distribution<double> attribution(-2.0, 2.0);
  for (double& p : phi) p = attribution(rng);
  AttributionTable a(table, std::move(phi));
  return make_bundle(std::move(id), std::move(g), std::move(table), std::move(a));
}

bool oracle_in_polygon(const std::vector<PlotCoord>& poly, double x, double y) {
  const std::size_t k = poly.size();
  bool inside = false;
  for (std::size_t i = 0; i < k; ++i) {
    const PlotCoord& a = poly[i];
    const PlotCoord& b = poly[(i + 1) % k];
    // On-segment: distance to the segment within 1e-9.
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((x - a.x) * dx + (y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (std::hypot(a.x + t * dx - x, a.y + t * dy - y) <= 1e-9) return true;
    // Upward ray from (x, y): count edges crossing the vertical line above.
    if ((a.x > x) != (b.x > x)) {
      const double y_cross = a.y + (x - a.x) * dy / dx;
      if (y_cross > y) inside = !inside;
    }
  }
  return inside;
}

bool oracle_contains(const Shape& shape, double x, double y) {
  if (const auto* r = std::get_if<RectangleShape>(&shape)) {
    return r->x0 <= x && x <= r->x1 && r->y0 <= y && y <= r->y1;
  }
  if (const auto* b = std::get_if<XBandShape>(&shape)) return b->lo <= x && x <= b->hi;
  if (const auto* b = std::get_if<YBandShape>(&shape)) return b->lo <= y && y <= b->hi;
  return oracle_in_polygon(std::get<PolygonShape>(shape).vertices, x, y);
}

Selection random_selection(Rng& rng, std::size_t n) {
  const double hi = static_cast<double>(n - 1);
  std::uniform_real_distribution<double> coord(-2.0, hi + 2.0);
  std::bernoulli_distribution integral(0.5);
  const auto pick = [&] {
    const double c = coord(rng);
    return integral(rng) ? std::round(c) : c;
  };
  const auto ordered = [&] {
    double a = pick(), b = pick();
    if (a > b) std::swap(a, b);
    return std::pair{a, b};
  };
  Selection s;
  s.class_filter = static_cast<ClassFilter>(rng() % 3);
  switch (rng() % 4) {
    case 0: {
      const auto [x0, x1] = ordered();
      const auto [y0, y1] = ordered();
      s.shape = RectangleShape{x0, x1, y0, y1};
      break;
    }
    case 1: {
      const auto [lo, hi_] = ordered();
      s.shape = XBandShape{lo, hi_};
      break;
    }
    case 2: {
      const auto [lo, hi_] = ordered();
      s.shape = YBandShape{lo, hi_};
      break;
    }
    default: {
      PolygonShape p;
      const std::size_t k = 3 + rng() % 6;
      for (std::size_t i = 0; i < k; ++i) p.vertices.push_back({pick(), pick()});
      s.shape = p;
      break;
    }
  }
  return s;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("odflow-test-" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace odflow::testing
