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

#include "odflow/odplot.hpp"

#include <numeric>
#include <string>

#include "odflow/error.hpp"
#include "odflow/kernels.hpp"

namespace odflow {

std::uint64_t OdMatrix::total() const {
  return std::accumulate(cells.begin(), cells.end(), std::uint64_t{0});
}

std::vector<OdPoint> project_trips(const TripTable& t, const FiedlerOrdering& o) {
  std::vector<OdPoint> points;
  points.reserve(t.size());
  for (const Trip& trip : t.trips()) {
    const auto x = o.rank_of(trip.origin);
    const auto y = o.rank_of(trip.dest);
    if (!x || !y) {
      throw Error(ErrorCode::kLookup,
                  "trip " + std::to_string(trip.id) + " references node " +
                      std::to_string(x ? trip.dest : trip.origin) +
                      " missing from the ordering");
    }
    points.push_back(OdPoint{trip.id, *x, *y});
  }
  return points;
}

std::vector<std::size_t> select_rows(std::span<const OdPoint> points,
                                     const TripTable& t, const Selection& s) {
  validate(s);
  return kernels::parallel::select_rows(points, t.labels(), s);
}

std::vector<TripId> select(std::span<const OdPoint> points, const TripTable& t,
                           const Selection& s) {
  std::vector<TripId> ids;
  for (std::size_t r : select_rows(points, t, s)) ids.push_back(t.trip(r).id);
  return ids;
}

OdMatrix density_grid(std::span<const OdPoint> points, std::size_t n,
                      std::size_t bins, std::span<const std::uint8_t> labels,
                      ClassFilter filter) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bins must be >= 1");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "rank count must be >= 1");
  std::vector<std::uint8_t> all;
  if (labels.empty()) {
    if (filter != ClassFilter::kAll) {
      throw Error(ErrorCode::kInvalidArgument, "class filter needs labels");
    }
    all.assign(points.size(), 0);
    labels = all;
  }
  OdMatrix m;
  m.resolution = bins;
  m.n = n;
  m.class_filter = filter;
  m.cells = kernels::parallel::bin_counts(points, labels, filter, n, bins);
  return m;
}

OdMatrix od_matrix(std::span<const OdPoint> points, const TripTable& t,
                   std::size_t n, std::size_t resolution, ClassFilter filter) {
  if (resolution < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 1");
  }
  return density_grid(points, n, resolution, t.labels(), filter);
}

std::vector<TripSegment> trip_geometry(std::span<const TripId> ids,
                                       const TripTable& t,
                                       const SpatialGraph& g) {
  std::vector<TripSegment> out;
  out.reserve(ids.size());
  for (const std::size_t r : t.rows_of(ids)) {
    const Trip& trip = t.trip(r);
    const auto o = g.index_of(trip.origin);
    const auto d = g.index_of(trip.dest);
    if (!o || !d) {
      throw Error(ErrorCode::kLookup,
                  "trip " + std::to_string(trip.id) + " references unknown node");
    }
    out.push_back(TripSegment{trip.id, g.position(*o), g.position(*d), trip.label});
  }
  return out;
}

void write_plot(std::span<const OdPoint> points, const TripTable& t,
                std::ostream& out, ClassFilter filter) {
  out << "trip_id,x,y,label,predicted\n";
  for (std::size_t r = 0; r < points.size(); ++r) {
    const Trip& trip = t.trip(r);
    if (!passes(filter, trip.label)) continue;
    out << points[r].trip_id << ',' << points[r].x << ',' << points[r].y << ','
        << int{trip.label} << ',' << int{trip.predicted} << '\n';
  }
}

void write_matrix(const OdMatrix& m, std::ostream& out) {
  for (std::size_t row = 0; row < m.resolution; ++row) {
    for (std::size_t col = 0; col < m.resolution; ++col) {
      if (col) out << ',';
      out << m.at(row, col);
    }
    out << '\n';
  }
}

}  // namespace odflow
