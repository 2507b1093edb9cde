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

#include <gtest/gtest.h>

#include <sstream>

#include "odflow/kernels.hpp"
#include "odflow/odplot.hpp"
#include "support.hpp"

namespace odflow {
namespace {

using testing::error_of;

// P4 with identity-like ranks and a handful of hand-placed trips.
struct SmallPlot {
  SpatialGraph graph = testing::path_graph(4);
  FiedlerOrdering ordering;
  TripTable trips;
  std::vector<OdPoint> points;

  SmallPlot() {
    ordering = order_nodes(graph, build_laplacian(graph));
    if (ordering.rank[0] != 0) {
      for (auto& r : ordering.rank) r = 3 - r;  // orient as 0..3 for readability
    }
    std::vector<Trip> t{{1, 0, 3, 0, 0}, {2, 2, 2, 1, 1}, {3, 1, 0, 1, 0}, {4, 3, 3, 0, 0}};
    trips = TripTable(t, {FeatureColumn::continuous("v", {1, 2, 3, 4})});
    points = project_trips(trips, ordering);
  }
};

TEST(Project, PointsFollowRanks) {
  SmallPlot p;
  ASSERT_EQ(p.points.size(), 4u);
  EXPECT_EQ(p.points[0].x, 0u);
  EXPECT_EQ(p.points[0].y, 3u);
  EXPECT_EQ(p.points[1].x, p.points[1].y);  // self-trip on the diagonal
  for (std::size_t r = 0; r < 4; ++r) {
    const Trip& t = p.trips.trip(r);
    EXPECT_EQ(p.points[r].trip_id, t.id);
    EXPECT_EQ(p.points[r].x == p.points[r].y, t.origin == t.dest);
  }
}

TEST(Project, ReversalMirrorsPoints) {
  SmallPlot p;
  FiedlerOrdering reversed = p.ordering;
  for (auto& r : reversed.rank) r = 3 - r;
  const auto mirrored = project_trips(p.trips, reversed);
  for (std::size_t i = 0; i < mirrored.size(); ++i) {
    EXPECT_EQ(mirrored[i].x, 3 - p.points[i].x);
    EXPECT_EQ(mirrored[i].y, 3 - p.points[i].y);
  }
}

TEST(Project, UnknownNodeIsLookupError) {
  SmallPlot p;
  TripTable bad({{9, 0, 42, 0, 0}}, {});
  EXPECT_EQ(error_of([&] { project_trips(bad, p.ordering); }), ErrorCode::kLookup);
}

TEST(Project, RelabelingNodesKeepsPoints) {
  testing::Rng rng(12);
  const DatasetBundle b = testing::random_bundle(rng, {.nodes = 30, .trips = 200});
  // Relabel ids by an order-reversing map so dense indices get permuted.
  const auto relabel = [](NodeId id) { return 100000 - id; };
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < b.graph.node_count(); ++i) {
    nodes.push_back({relabel(b.graph.node_id(i)), b.graph.position(i)});
  }
  std::vector<EdgeRecord> edges;
  for (const Edge& e : b.graph.edges()) {
    edges.push_back({relabel(b.graph.node_id(e.u)), relabel(b.graph.node_id(e.v)), e.length});
  }
  const SpatialGraph g2 = SpatialGraph::from_records(nodes, edges);
  FiedlerOrdering o2;
  o2.node_ids.assign(g2.node_ids().begin(), g2.node_ids().end());
  o2.rank.resize(g2.node_count());
  o2.component.assign(g2.node_count(), 0);
  o2.fiedler_value.assign(g2.node_count(), 0.0);
  for (std::size_t i = 0; i < g2.node_count(); ++i) {
    o2.rank[i] = *b.ordering.rank_of(relabel(g2.node_id(i)));
  }
  std::vector<Trip> trips(b.trips.trips().begin(), b.trips.trips().end());
  for (Trip& t : trips) {
    t.origin = relabel(t.origin);
    t.dest = relabel(t.dest);
  }
  const TripTable t2(trips, {});
  const auto p2 = project_trips(t2, o2);
  ASSERT_EQ(p2.size(), b.points.size());
  for (std::size_t i = 0; i < p2.size(); ++i) {
    EXPECT_EQ(p2[i].x, b.points[i].x);
    EXPECT_EQ(p2[i].y, b.points[i].y);
  }
}

TEST(Select, FullRectangleSelectsAll) {
  SmallPlot p;
  const auto ids = select(p.points, p.trips, {RectangleShape{0, 3, 0, 3}, ClassFilter::kAll});
  EXPECT_EQ(ids, (std::vector<TripId>{1, 2, 3, 4}));
}

TEST(Select, BandsAndClassFilter) {
  SmallPlot p;
  // Origin band [1, 2]: trips 2 (2->2) and 3 (1->0).
  EXPECT_EQ(select(p.points, p.trips, {XBandShape{1, 2}, ClassFilter::kAll}),
            (std::vector<TripId>{2, 3}));
  EXPECT_EQ(select(p.points, p.trips, {YBandShape{3, 3}, ClassFilter::kAll}),
            (std::vector<TripId>{1, 4}));
  EXPECT_EQ(select(p.points, p.trips, {XBandShape{0, 3}, ClassFilter::kClass1}),
            (std::vector<TripId>{2, 3}));
  EXPECT_EQ(select(p.points, p.trips, {XBandShape{0, 3}, ClassFilter::kClass0}),
            (std::vector<TripId>{1, 4}));
}

TEST(Select, PolygonBoundaryIsInside) {
  SmallPlot p;
  // Triangle x + y <= 3 in the first quadrant: trip 1 sits on a vertex,
  // trip 3 on the lower edge, trip 2 at (2, 2) is outside.
  PolygonShape tri{{{0, 0}, {3, 0}, {0, 3}}};
  EXPECT_EQ(select(p.points, p.trips, {tri, ClassFilter::kAll}),
            (std::vector<TripId>{1, 3}));
  EXPECT_TRUE(contains(tri, 1.5, 1.5));
  EXPECT_FALSE(contains(tri, 1.5, 1.5 + 1e-6));
}

TEST(Select, SelfIntersectingPolygonUsesEvenOdd) {
  // Pentagram: the centre is covered twice, so even-odd leaves it outside.
  PolygonShape star{{{0, 10}, {6, -8}, {-9.5, 3}, {9.5, 3}, {-6, -8}}};
  EXPECT_FALSE(contains(star, 0, 0));
  EXPECT_TRUE(contains(star, 0, 8));
}

TEST(Select, InvalidSelections) {
  SmallPlot p;
  EXPECT_EQ(error_of([&] { select(p.points, p.trips, {RectangleShape{2, 1, 0, 1}}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] { select(p.points, p.trips, {PolygonShape{{{0, 0}, {1, 1}}}}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] {
              select(p.points, p.trips, {XBandShape{0, std::numeric_limits<double>::infinity()}});
            }),
            ErrorCode::kInvalidArgument);
}

TEST(Select, MatchesBruteForce) {
  testing::Rng rng(77);
  const DatasetBundle b = testing::random_bundle(rng, {.nodes = 60, .trips = 800});
  const std::size_t n = b.ordering.size();
  for (int k = 0; k < 300; ++k) {
    const Selection s = testing::random_selection(rng, n);
    std::vector<TripId> expected;
    for (std::size_t r = 0; r < b.trips.size(); ++r) {
      const Trip& t = b.trips.trip(r);
      const double x = *b.ordering.rank_of(t.origin);
      const double y = *b.ordering.rank_of(t.dest);
      if (passes(s.class_filter, t.label) && testing::oracle_contains(s.shape, x, y)) {
        expected.push_back(t.id);
      }
    }
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(select(b.points, b.trips, s), expected);
  }
}

TEST(Density, OneBinHoldsEverything) {
  SmallPlot p;
  const OdMatrix m = density_grid(p.points, 4, 1);
  EXPECT_EQ(m.cells, (std::vector<std::uint64_t>{4}));
}

TEST(Density, FullResolutionCountsExactPairs) {
  SmallPlot p;
  const OdMatrix m = density_grid(p.points, 4, 4);
  EXPECT_EQ(m.at(3, 0), 1u);  // trip 1: origin rank 0, dest rank 3
  EXPECT_EQ(m.at(2, 2), 1u);
  EXPECT_EQ(m.at(0, 1), 1u);
  EXPECT_EQ(m.at(3, 3), 1u);
  EXPECT_EQ(m.total(), 4u);
  EXPECT_EQ(error_of([&] { density_grid(p.points, 4, 0); }), ErrorCode::kInvalidArgument);
}

TEST(Matrix, FloorBinning) {
  EXPECT_EQ(kernels::bin_of(301, 18, 302), 17u);
  EXPECT_EQ(kernels::bin_of(0, 18, 302), 0u);
  EXPECT_EQ(kernels::bin_of(16, 18, 302), 0u);   // 16*18/302 = 0.95
  EXPECT_EQ(kernels::bin_of(17, 18, 302), 1u);   // 17*18/302 = 1.01
  EXPECT_EQ(kernels::bin_of(301, 302, 302), 301u);
}

TEST(Matrix, ConservationCoarseningAndFullResolution) {
  testing::Rng rng(21);
  const DatasetBundle b = testing::random_bundle(rng, {.nodes = 37, .trips = 500});
  const std::size_t n = b.ordering.size();
  for (ClassFilter f : {ClassFilter::kAll, ClassFilter::kClass0, ClassFilter::kClass1}) {
    std::uint64_t expected = 0;
    for (auto label : b.trips.labels()) expected += passes(f, label);
    const OdMatrix one = od_matrix(b.points, b.trips, n, 1, f);
    for (std::size_t R = 1; R <= n; ++R) {
      const OdMatrix m = od_matrix(b.points, b.trips, n, R, f);
      EXPECT_EQ(m.total(), expected);
      EXPECT_EQ(density_grid(b.points, n, R, b.trips.labels(), f).total(), expected);
      EXPECT_EQ(m.total(), one.cells[0]);
    }
    const OdMatrix full = od_matrix(b.points, b.trips, n, n, f);
    EXPECT_EQ(full.cells, density_grid(b.points, n, n, b.trips.labels(), f).cells);
    // Cell-by-cell against a direct count.
    std::vector<std::uint64_t> direct(n * n, 0);
    for (std::size_t r = 0; r < b.points.size(); ++r) {
      if (passes(f, b.trips.trip(r).label)) ++direct[b.points[r].y * n + b.points[r].x];
    }
    EXPECT_EQ(full.cells, direct);
  }
}

TEST(Matrix, CsvLayout) {
  SmallPlot p;
  std::ostringstream out;
  write_matrix(od_matrix(p.points, p.trips, 4, 2), out);
  // Bins: ranks {0,1} -> 0, {2,3} -> 1. Rows are destination bins.
  EXPECT_EQ(out.str(), "1,0\n1,2\n");
}

TEST(PlotCsv, FilteredExport) {
  SmallPlot p;
  std::ostringstream out;
  write_plot(p.points, p.trips, out, ClassFilter::kClass1);
  EXPECT_EQ(out.str(), "trip_id,x,y,label,predicted\n2,2,2,1,1\n3,1,0,1,0\n");
}

TEST(Geometry, SegmentsUseNodePositions) {
  SmallPlot p;
  EXPECT_TRUE(trip_geometry({}, p.trips, p.graph).empty());
  const std::vector<TripId> ids{2, 1};
  const auto seg = trip_geometry(ids, p.trips, p.graph);
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(seg[0].trip_id, 2);
  EXPECT_EQ(seg[0].origin, seg[0].dest);  // zero-length self-trip
  EXPECT_EQ(seg[0].origin, (Point{2, 0}));
  EXPECT_EQ(seg[0].label, 1);
  EXPECT_EQ(seg[1].origin, (Point{0, 0}));
  EXPECT_EQ(seg[1].dest, (Point{3, 0}));
  const std::vector<TripId> unknown{99};
  EXPECT_EQ(error_of([&] { trip_geometry(unknown, p.trips, p.graph); }), ErrorCode::kLookup);
}

TEST(Kernels, ParallelMatchesSerial) {
  testing::Rng rng(99);
  const DatasetBundle b = testing::random_bundle(rng, {.nodes = 300, .trips = 20000});
  const std::size_t n = b.ordering.size();
  for (int k = 0; k < 40; ++k) {
    const Selection s = testing::random_selection(rng, n);
    EXPECT_EQ(kernels::parallel::select_rows(b.points, b.trips.labels(), s),
              kernels::serial::select_rows(b.points, b.trips.labels(), s));
  }
  for (std::size_t bins : {1, 7, 64, 300}) {
    EXPECT_EQ(kernels::parallel::bin_counts(b.points, b.trips.labels(), ClassFilter::kClass1, n, bins),
              kernels::serial::bin_counts(b.points, b.trips.labels(), ClassFilter::kClass1, n, bins));
  }
  std::vector<std::size_t> rows(b.trips.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto ps = kernels::parallel::class_abs_sums(b.attributions.values(), 5, rows, b.trips.labels());
  const auto ss = kernels::serial::class_abs_sums(b.attributions.values(), 5, rows, b.trips.labels());
  EXPECT_EQ(ps.sums, ss.sums);
  EXPECT_EQ(ps.counts, ss.counts);
  const LaplacianMatrix L = build_laplacian(testing::random_connected_graph(rng, 6000, 3000));
  std::vector<double> x(L.n), y1(L.n), y2(L.n);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& v : x) v = u(rng);
  kernels::serial::spmv(L, x, y1);
  kernels::parallel::spmv(L, x, y2);
  EXPECT_EQ(y1, y2);
}

}  // namespace
}  // namespace odflow
