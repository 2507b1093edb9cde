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

#include "odflow/selection.hpp"

#include <cmath>
#include <string>

#include "odflow/error.hpp"

namespace odflow {

std::optional<ClassFilter> parse_class_filter(std::string_view text) {
  if (text == "all") return ClassFilter::kAll;
  if (text == "0") return ClassFilter::kClass0;
  if (text == "1") return ClassFilter::kClass1;
  return std::nullopt;
}

std::string_view class_filter_name(ClassFilter filter) {
  switch (filter) {
    case ClassFilter::kAll: return "all";
    case ClassFilter::kClass0: return "0";
    case ClassFilter::kClass1: return "1";
  }
  return "all";
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

bool finite(double a) { return std::isfinite(a); }

struct Validator {
  void operator()(const RectangleShape& r) const {
    require(finite(r.x0) && finite(r.x1) && finite(r.y0) && finite(r.y1),
            "rectangle bounds must be finite");
    require(r.x0 <= r.x1 && r.y0 <= r.y1,
            "rectangle bounds must satisfy x0 <= x1 and y0 <= y1");
  }
  void operator()(const XBandShape& b) const {
    require(finite(b.lo) && finite(b.hi), "band bounds must be finite");
    require(b.lo <= b.hi, "band bounds must satisfy min <= max");
  }
  void operator()(const YBandShape& b) const {
    require(finite(b.lo) && finite(b.hi), "band bounds must be finite");
    require(b.lo <= b.hi, "band bounds must satisfy min <= max");
  }
  void operator()(const PolygonShape& p) const {
    require(p.vertices.size() >= 3, "polygon needs at least 3 vertices");
    for (const auto& v : p.vertices) {
      require(finite(v.x) && finite(v.y), "polygon vertices must be finite");
    }
  }
};

bool on_segment(const PlotCoord& a, const PlotCoord& b, double x, double y) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) {
    return std::hypot(x - a.x, y - a.y) <= kPolygonBoundaryTolerance;
  }
  const double t = ((x - a.x) * dx + (y - a.y) * dy) / len2;
  if (t < 0.0 || t > 1.0) {
    return std::hypot(x - a.x, y - a.y) <= kPolygonBoundaryTolerance ||
           std::hypot(x - b.x, y - b.y) <= kPolygonBoundaryTolerance;
  }
  const double cross = dx * (y - a.y) - dy * (x - a.x);
  return std::abs(cross) <= kPolygonBoundaryTolerance * std::sqrt(len2);
}

bool polygon_contains(const PolygonShape& p, double x, double y) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (on_segment(v[j], v[i], x, y)) return true;
  }
  // Horizontal ray towards +x, half-open vertex rule.
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const PlotCoord& a = v[j];
    const PlotCoord& b = v[i];
    if ((a.y > y) != (b.y > y)) {
      const double cross_x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x < cross_x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

void validate(const Selection& s) { std::visit(Validator{}, s.shape); }

bool contains(const Shape& shape, double x, double y) {
  if (const auto* r = std::get_if<RectangleShape>(&shape)) {
    return r->x0 <= x && x <= r->x1 && r->y0 <= y && y <= r->y1;
  }
  if (const auto* b = std::get_if<XBandShape>(&shape)) {
    return b->lo <= x && x <= b->hi;
  }
  if (const auto* b = std::get_if<YBandShape>(&shape)) {
    return b->lo <= y && y <= b->hi;
  }
  return polygon_contains(std::get<PolygonShape>(shape), x, y);
}

}  // namespace odflow
