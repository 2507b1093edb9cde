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

#include "odflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "odflow/csv.hpp"
#include "odflow/error.hpp"
#include "odflow/explain.hpp"

namespace odflow {

namespace {

// Portable draws on top of mt19937_64; the standard distributions are
// implementation-defined, which would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

double dist2(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

SpatialGraph random_planar(std::size_t n, double extent, Rng& rng) {
  std::vector<NodeRecord> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = NodeRecord{static_cast<NodeId>(i),
                          Point{rng.uniform() * extent, rng.uniform() * extent}};
  }

  // A point inside the diametral circle of (i, j) is strictly closer to i
  // than j is, so the Gabriel test for a candidate j only needs i's nearer
  // neighbours.
  const std::size_t k = std::min<std::size_t>(n - 1, 12);
  std::vector<EdgeRecord> edges;
  DisjointSets sets(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    const Point& p = nodes[i].position;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        const double da = dist2(p, nodes[a].position);
                        const double db = dist2(p, nodes[b].position);
                        return da != db ? da < db : a < b;
                      });
    // order[0] is i itself.
    for (std::size_t a = 1; a <= k; ++a) {
      const std::size_t j = order[a];
      const Point& q = nodes[j].position;
      const Point mid{(p.x + q.x) / 2, (p.y + q.y) / 2};
      const double r2 = dist2(p, q) / 4;
      bool gabriel = true;
      for (std::size_t b = 1; b < a && gabriel; ++b) {
        gabriel = dist2(mid, nodes[order[b]].position) >= r2;
      }
      if (gabriel) {
        edges.push_back(EdgeRecord{static_cast<NodeId>(i), static_cast<NodeId>(j),
                                   std::sqrt(dist2(p, q))});
        sets.unite(i, j);
      }
    }
  }

  // Bridge leftover components with the shortest cross edge (an MST edge,
  // hence also a Gabriel edge).
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (sets.find(i) == sets.find(j)) continue;
        const double d = dist2(nodes[i].position, nodes[j].position);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (!std::isfinite(best)) break;
    edges.push_back(EdgeRecord{static_cast<NodeId>(bi), static_cast<NodeId>(bj),
                               std::sqrt(best)});
    sets.unite(bi, bj);
  }
  return SpatialGraph::from_records(std::move(nodes), edges);
}

struct Encoding {
  std::vector<double> weights;
  std::vector<std::vector<double>> x;  // per trip, encoded features
};

}  // namespace

void parse_graph_kind(std::string_view text, SyntheticSpec& spec) {
  const auto colon = text.find(':');
  const auto bad = [&] {
    throw Error(ErrorCode::kInvalidArgument,
                "graph must be path:N, grid:WxH or random-planar:N, got '" +
                    std::string(text) + "'");
  };
  if (colon == std::string_view::npos) bad();
  const auto kind = text.substr(0, colon);
  const auto arg = text.substr(colon + 1);
  if (kind == "grid") {
    const auto x = arg.find('x');
    if (x == std::string_view::npos) bad();
    const auto w = csv::parse_int(arg.substr(0, x));
    const auto h = csv::parse_int(arg.substr(x + 1));
    if (!w || !h || *w < 1 || *h < 1) bad();
    spec.graph = GraphKind::kGrid;
    spec.width = static_cast<std::size_t>(*w);
    spec.height = static_cast<std::size_t>(*h);
    return;
  }
  const auto n = csv::parse_int(arg);
  if (!n || *n < 1) bad();
  if (kind == "path") {
    spec.graph = GraphKind::kPath;
  } else if (kind == "random-planar") {
    spec.graph = GraphKind::kRandomPlanar;
  } else {
    bad();
  }
  spec.nodes = static_cast<std::size_t>(*n);
}

void validate(const SyntheticSpec& spec) {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  double total = 0.0;
  for (double w : spec.mix) {
    require(std::isfinite(w) && w >= 0.0, "pattern weights must be >= 0");
    total += w;
  }
  require(total > 0.0, "pattern weights must not all be zero");
  require(spec.trips >= 1, "trip count must be >= 1");
  require(spec.class1_fraction >= 0.0 && spec.class1_fraction <= 1.0,
          "class-1 fraction must lie in [0, 1]");
  require(spec.extent > 0.0, "extent must be positive");
  if (spec.graph == GraphKind::kGrid) {
    require(spec.width * spec.height >= 2, "grid needs at least 2 nodes");
  } else {
    require(spec.nodes >= 2, "graph needs at least 2 nodes");
  }
}

SpatialGraph synth_graph(const SyntheticSpec& spec) {
  validate(spec);
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  switch (spec.graph) {
    case GraphKind::kPath:
      for (std::size_t i = 0; i < spec.nodes; ++i) {
        nodes.push_back({static_cast<NodeId>(i), {static_cast<double>(i), 0.0}});
        if (i > 0) {
          edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(i), 1.0});
        }
      }
      return SpatialGraph::from_records(std::move(nodes), edges);
    case GraphKind::kGrid:
      for (std::size_t y = 0; y < spec.height; ++y) {
        for (std::size_t x = 0; x < spec.width; ++x) {
          const auto id = static_cast<NodeId>(y * spec.width + x);
          nodes.push_back({id, {static_cast<double>(x), static_cast<double>(y)}});
          if (x > 0) edges.push_back({id - 1, id, 1.0});
          if (y > 0) edges.push_back({id - static_cast<NodeId>(spec.width), id, 1.0});
        }
      }
      return SpatialGraph::from_records(std::move(nodes), edges);
    case GraphKind::kRandomPlanar: {
      Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
      return random_planar(spec.nodes, spec.extent, rng);
    }
  }
  return {};
}

std::size_t pattern_band_width(std::size_t n) {
  return std::max<std::size_t>(1, n / 20);
}

DatasetBundle synthesize(const SyntheticSpec& spec, const SolverOptions& options) {
  SpatialGraph graph = synth_graph(spec);
  FiedlerOrdering ordering = order_nodes(graph, build_laplacian(graph), options);
  const std::size_t n = graph.node_count();

  std::vector<std::size_t> node_at_rank(n);
  for (std::size_t i = 0; i < n; ++i) node_at_rank[ordering.rank[i]] = i;

  Rng rng(spec.seed);
  const std::size_t band = pattern_band_width(n);
  const std::size_t reach = n / 50;  // diagonal spread, 2% of n
  const auto band_start = [&](std::size_t lo, std::size_t hi) {
    // Uniform start in [lo, hi - band], clipped to the axis.
    hi = std::min(hi, n);
    if (hi < lo + band) return std::min(lo, n - band);
    return lo + rng.below(hi - lo - band + 1);
  };
  const std::size_t vertical_start = band_start(0, n);
  const std::size_t horizontal_start = band_start(0, n);
  std::size_t cluster_origin = band_start(0, n / 2);
  std::size_t cluster_dest = band_start(n / 2 + n / 6, n);
  if (rng.uniform() < 0.5) std::swap(cluster_origin, cluster_dest);

  const double mix_total = spec.mix[0] + spec.mix[1] + spec.mix[2] + spec.mix[3];
  const auto pick_pattern = [&] {
    double u = rng.uniform() * mix_total;
    for (std::size_t p = 0; p < 3; ++p) {
      if (u < spec.mix[p] && spec.mix[p] > 0.0) return p;
      u -= spec.mix[p];
    }
    for (std::size_t p = 4; p-- > 0;) {
      if (spec.mix[p] > 0.0) return p;
    }
    return std::size_t{0};
  };

  double diag = 0.0;
  {
    Point lo{std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
    Point hi{-lo.x, -lo.y};
    for (const Point& p : graph.positions()) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    diag = std::max(std::hypot(hi.x - lo.x, hi.y - lo.y), 1e-12);
  }

  static const std::array<const char*, 3> kWeather{"clear", "rain", "fog"};
  static const std::array<double, 3> kWeatherRisk{0.0, 0.6, 1.0};
  static const std::array<const char*, 4> kVehicle{"car", "bicycle", "motorcycle",
                                                   "truck"};
  static const std::array<double, 4> kVehicleRisk{0.0, 0.8, 1.0, 0.3};
  const std::vector<double> weights{2.5, 1.2, 0.6, 1.0, 1.4, 0.5};

  const std::size_t count = spec.trips;
  std::vector<Trip> trips(count);
  std::vector<double> distance(count), hour(count), age(count);
  std::vector<std::string> weather(count), vehicle(count), weekend(count);
  std::vector<std::vector<double>> encoded(count);

  for (std::size_t t = 0; t < count; ++t) {
    std::size_t o = 0, d = 0;
    switch (pick_pattern()) {
      case kDiagonal: {
        o = rng.below(n);
        const auto lo = static_cast<std::ptrdiff_t>(o) - static_cast<std::ptrdiff_t>(reach);
        const std::ptrdiff_t step =
            static_cast<std::ptrdiff_t>(rng.below(2 * reach + 1));
        d = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(lo + step, 0, static_cast<std::ptrdiff_t>(n) - 1));
        break;
      }
      case kVertical:
        o = vertical_start + rng.below(band);
        d = rng.below(n);
        break;
      case kHorizontal:
        o = rng.below(n);
        d = horizontal_start + rng.below(band);
        break;
      default:
        o = cluster_origin + rng.below(band);
        d = cluster_dest + rng.below(band);
        break;
    }
    const std::size_t oi = node_at_rank[o];
    const std::size_t di = node_at_rank[d];
    trips[t] = Trip{static_cast<TripId>(t + 1), graph.node_id(oi), graph.node_id(di), 0, 0};

    const Point& po = graph.position(oi);
    const Point& pd = graph.position(di);
    distance[t] = std::round(std::hypot(po.x - pd.x, po.y - pd.y) * 1000.0) / 1000.0;
    hour[t] = std::floor(rng.uniform() * 2400.0) / 100.0;
    age[t] = 18.0 + static_cast<double>(rng.below(63));
    const double uw = rng.uniform();
    const std::size_t w = uw < 0.7 ? 0 : (uw < 0.9 ? 1 : 2);
    const double uv = rng.uniform();
    const std::size_t v = uv < 0.6 ? 0 : (uv < 0.8 ? 1 : (uv < 0.9 ? 2 : 3));
    const bool is_weekend = rng.uniform() < 2.0 / 7.0;
    weather[t] = kWeather[w];
    vehicle[t] = kVehicle[v];
    weekend[t] = is_weekend ? "yes" : "no";
    encoded[t] = {distance[t] / diag,
                  std::abs(hour[t] - 12.0) / 12.0,
                  (age[t] - 18.0) / 62.0,
                  kWeatherRisk[w],
                  kVehicleRisk[v],
                  is_weekend ? 1.0 : 0.0};
  }

  std::vector<double> background(weights.size(), 0.0);
  for (const auto& e : encoded) {
    for (std::size_t k = 0; k < e.size(); ++k) background[k] += e[k];
  }
  for (double& b : background) b /= static_cast<double>(count);

  std::vector<double> score(count), latent(count);
  for (std::size_t t = 0; t < count; ++t) {
    score[t] = linear_model(weights, 0.0, encoded[t]);
    latent[t] = score[t] + 0.35 * rng.normal();
  }
  const auto positives = static_cast<std::size_t>(
      std::llround(spec.class1_fraction * static_cast<double>(count)));
  const auto mark_top = [&](const std::vector<double>& key, auto assign) {
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    for (std::size_t k = 0; k < positives; ++k) assign(idx[k]);
  };
  mark_top(latent, [&](std::size_t t) { trips[t].label = 1; });
  mark_top(score, [&](std::size_t t) { trips[t].predicted = 1; });

  std::vector<double> phi;
  phi.reserve(count * weights.size());
  for (std::size_t t = 0; t < count; ++t) {
    const auto row = linear_shapley(weights, 0.0, background, encoded[t]);
    phi.insert(phi.end(), row.begin(), row.end());
  }

  std::vector<FeatureColumn> columns;
  columns.push_back(FeatureColumn::continuous("distance", distance));
  columns.push_back(FeatureColumn::continuous("hour", hour));
  columns.push_back(FeatureColumn::continuous("age", age));
  columns.push_back(FeatureColumn::discrete("weather", weather));
  columns.push_back(FeatureColumn::discrete("vehicle", vehicle));
  columns.push_back(FeatureColumn::discrete("weekend", weekend));
  // Trip ids are assigned in generation order, so the table keeps this row
  // order and phi stays aligned.
  TripTable table(std::move(trips), std::move(columns));
  AttributionTable attributions(table, std::move(phi));

  return make_bundle("synthetic", std::move(graph), std::move(table),
                     std::move(attributions), std::move(ordering), options);
}

}  // namespace odflow
