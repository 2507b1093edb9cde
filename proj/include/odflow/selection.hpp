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

#ifndef ODFLOW_SELECTION_HPP_
#define ODFLOW_SELECTION_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace odflow {

using TripId = std::int64_t;

// One trip placed on the OD-plot: x is the origin rank, y the destination
// rank under the active node ordering.
struct OdPoint {
  TripId trip_id = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  friend bool operator==(const OdPoint&, const OdPoint&) = default;
};

enum class ClassFilter : std::uint8_t { kAll, kClass0, kClass1 };

constexpr bool passes(ClassFilter filter, std::uint8_t label) {
  switch (filter) {
    case ClassFilter::kAll: return true;
    case ClassFilter::kClass0: return label == 0;
    case ClassFilter::kClass1: return label == 1;
  }
  return false;
}

// Accepts "all", "0" and "1".
std::optional<ClassFilter> parse_class_filter(std::string_view text);
std::string_view class_filter_name(ClassFilter filter);

struct PlotCoord {
  double x = 0.0;
  double y = 0.0;
};

// All bounds are inclusive and expressed in plot (rank) coordinates.
struct RectangleShape {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};
struct XBandShape {
  double lo = 0.0, hi = 0.0;
};
struct YBandShape {
  double lo = 0.0, hi = 0.0;
};
// Even-odd membership; points on an edge count as inside.
struct PolygonShape {
  std::vector<PlotCoord> vertices;
};

using Shape = std::variant<RectangleShape, XBandShape, YBandShape, PolygonShape>;

struct Selection {
  Shape shape;
  ClassFilter class_filter = ClassFilter::kAll;
};

// Points closer than this to a polygon edge are treated as on the boundary.
inline constexpr double kPolygonBoundaryTolerance = 1e-9;

// Throws Error(kInvalidArgument) on unordered bounds, non-finite coordinates
// or polygons with fewer than three vertices.
void validate(const Selection& s);

bool contains(const Shape& shape, double x, double y);

}  // namespace odflow

#endif  // ODFLOW_SELECTION_HPP_
