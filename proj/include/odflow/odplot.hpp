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

#ifndef ODFLOW_ODPLOT_HPP_
#define ODFLOW_ODPLOT_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "odflow/graph.hpp"
#include "odflow/selection.hpp"
#include "odflow/spectral.hpp"
#include "odflow/trips.hpp"

namespace odflow {

// Square count grid over rank space. cells is row-major with rows indexed by
// destination bin and columns by origin bin, matching the OD-plot axes.
// Rank r falls in bin floor(r * resolution / n).
struct OdMatrix {
  std::size_t resolution = 1;
  std::size_t n = 1;  // number of ranks on each axis
  ClassFilter class_filter = ClassFilter::kAll;
  std::vector<std::uint64_t> cells;

  std::uint64_t at(std::size_t dest_bin, std::size_t origin_bin) const {
    return cells[dest_bin * resolution + origin_bin];
  }
  std::uint64_t total() const;
};

struct TripSegment {
  TripId trip_id = 0;
  Point origin;
  Point dest;
  std::uint8_t label = 0;
};

// One point per trip, aligned with the table's rows. Throws Error(kLookup)
// naming the first trip whose origin or destination the ordering lacks.
std::vector<OdPoint> project_trips(const TripTable& t, const FiedlerOrdering& o);

// Trips whose point lies in the shape (boundary inclusive) and whose true
// label passes the class filter, ascending by trip_id. Validates `s`.
std::vector<TripId> select(std::span<const OdPoint> points, const TripTable& t,
                           const Selection& s);
std::vector<std::size_t> select_rows(std::span<const OdPoint> points,
                                     const TripTable& t, const Selection& s);

// Per-bin point counts over n ranks. `labels` may be empty when `filter` is
// kAll. Throws Error(kInvalidArgument) unless bins >= 1 and n >= 1.
OdMatrix density_grid(std::span<const OdPoint> points, std::size_t n,
                      std::size_t bins,
                      std::span<const std::uint8_t> labels = {},
                      ClassFilter filter = ClassFilter::kAll);

OdMatrix od_matrix(std::span<const OdPoint> points, const TripTable& t,
                   std::size_t n, std::size_t resolution,
                   ClassFilter filter = ClassFilter::kAll);

// Straight origin -> destination segments for client-side drawing. Throws
// Error(kLookup) for unknown trip ids.
std::vector<TripSegment> trip_geometry(std::span<const TripId> ids,
                                       const TripTable& t,
                                       const SpatialGraph& g);

// `trip_id,x,y,label,predicted`, optionally restricted by class.
void write_plot(std::span<const OdPoint> points, const TripTable& t,
                std::ostream& out, ClassFilter filter = ClassFilter::kAll);

// R lines of R comma-separated counts, destinations on rows.
void write_matrix(const OdMatrix& m, std::ostream& out);

}  // namespace odflow

#endif  // ODFLOW_ODPLOT_HPP_
