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

#include "odflow/report.hpp"

#include <string_view>

namespace odflow {

namespace {

[[noreturn]] void bad_request(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

double number_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    bad_request(std::string("shape field '") + key + "' must be a number");
  }
  return it->get<double>();
}

Shape parse_shape(const Json& j) {
  if (!j.is_object()) bad_request("'shape' must be an object");
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string()) {
    bad_request("shape needs a string 'type'");
  }
  const std::string kind = type->get<std::string>();
  if (kind == "rectangle") {
    return RectangleShape{number_field(j, "x0"), number_field(j, "x1"),
                          number_field(j, "y0"), number_field(j, "y1")};
  }
  if (kind == "x_band") {
    return XBandShape{number_field(j, "min"), number_field(j, "max")};
  }
  if (kind == "y_band") {
    return YBandShape{number_field(j, "min"), number_field(j, "max")};
  }
  if (kind == "polygon") {
    const auto v = j.find("vertices");
    if (v == j.end() || !v->is_array()) {
      bad_request("polygon needs a 'vertices' array");
    }
    PolygonShape p;
    for (const auto& xy : *v) {
      if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() ||
          !xy[1].is_number()) {
        bad_request("polygon vertices must be [x, y] number pairs");
      }
      p.vertices.push_back(PlotCoord{xy[0].get<double>(), xy[1].get<double>()});
    }
    return p;
  }
  bad_request("unknown shape type '" + kind + "'");
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

SelectionRequest parse_selection_request(const Json& body) {
  if (!body.is_object()) bad_request("request body must be a JSON object");
  SelectionRequest req;
  const auto shape = body.find("shape");
  if (shape == body.end()) bad_request("missing 'shape'");
  req.selection.shape = parse_shape(*shape);

  if (const auto cf = body.find("class_filter"); cf != body.end()) {
    std::string text;
    if (cf->is_string()) {
      text = cf->get<std::string>();
    } else if (cf->is_number_integer()) {
      text = std::to_string(cf->get<long long>());
    }
    const auto parsed = parse_class_filter(text);
    if (!parsed) bad_request("class_filter must be \"all\", \"0\" or \"1\"");
    req.selection.class_filter = *parsed;
  }
  if (const auto f = body.find("detail_feature");
      f != body.end() && !f->is_null()) {
    if (!f->is_string()) bad_request("detail_feature must be a string");
    req.detail_feature = f->get<std::string>();
  }
  if (const auto g = body.find("group_by"); g != body.end()) {
    const auto parsed =
        g->is_string() ? parse_group_by(g->get<std::string>()) : std::nullopt;
    if (!parsed) bad_request("group_by must be \"label\" or \"predicted\"");
    req.group_by = *parsed;
  }
  if (const auto b = body.find("bins"); b != body.end()) {
    if (!b->is_number_integer() || b->get<long long>() < 1) {
      bad_request("bins must be a positive integer");
    }
    req.bins = static_cast<std::size_t>(b->get<long long>());
  }
  validate(req.selection);
  return req;
}

Json to_json(const Selection& s) {
  Json shape;
  if (const auto* r = std::get_if<RectangleShape>(&s.shape)) {
    shape = {{"type", "rectangle"}, {"x0", r->x0}, {"x1", r->x1},
             {"y0", r->y0}, {"y1", r->y1}};
  } else if (const auto* b = std::get_if<XBandShape>(&s.shape)) {
    shape = {{"type", "x_band"}, {"min", b->lo}, {"max", b->hi}};
  } else if (const auto* yb = std::get_if<YBandShape>(&s.shape)) {
    shape = {{"type", "y_band"}, {"min", yb->lo}, {"max", yb->hi}};
  } else {
    Json vertices = Json::array();
    for (const auto& v : std::get<PolygonShape>(s.shape).vertices) {
      vertices.push_back({v.x, v.y});
    }
    shape = {{"type", "polygon"}, {"vertices", vertices}};
  }
  return {{"shape", shape}, {"class_filter", class_filter_name(s.class_filter)}};
}

Json importance_json(const ImportanceReport& r) {
  Json features = Json::array();
  for (const auto& f : r.features) {
    features.push_back({{"name", f.name},
                        {"mean_abs_class0", optional_number(f.mean_abs[0])},
                        {"mean_abs_class1", optional_number(f.mean_abs[1])}});
  }
  return {{"group_by", group_by_name(r.group_by)},
          {"support", {r.support[0], r.support[1]}},
          {"features", features}};
}

Json evaluation_json(const EvaluationReport& r) {
  Json classes = Json::array();
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& e = r.classes[c];
    classes.push_back({{"class", c},
                       {"support", e.support},
                       {"hits", e.hits},
                       {"misses", e.support - e.hits},
                       {"hit_pct", optional_number(e.hit_pct)},
                       {"miss_pct", optional_number(e.miss_pct)}});
  }
  return {{"classes", classes}};
}

Json feature_detail_json(const FeatureDetail& d) {
  Json out = {{"name", d.name}, {"kind", feature_kind_name(d.kind)}};
  if (d.kind == FeatureKind::kDiscrete) {
    out["categories"] = d.categories;
  } else {
    out["edges"] = d.edges;
  }
  Json classes = Json::array();
  for (std::size_t c = 0; c < 2; ++c) {
    classes.push_back(
        {{"class", c}, {"support", d.support[c]}, {"counts", d.counts[c]}});
  }
  out["classes"] = classes;
  return out;
}

Json geometry_json(std::span<const TripSegment> segments) {
  Json out = Json::array();
  for (const auto& s : segments) {
    out.push_back({{"trip_id", s.trip_id},
                   {"origin", {s.origin.x, s.origin.y}},
                   {"dest", {s.dest.x, s.dest.y}},
                   {"label", s.label}});
  }
  return out;
}

Json selection_report(const DatasetBundle& b, const SelectionRequest& request) {
  if (request.detail_feature && !b.trips.feature_index(*request.detail_feature)) {
    throw Error(ErrorCode::kLookup,
                "unknown feature '" + *request.detail_feature + "'");
  }
  const std::vector<TripId> ids = select(b.points, b.trips, request.selection);

  Json out;
  out["trip_ids"] = ids;
  out["count"] = ids.size();
  out["class_filter"] = class_filter_name(request.selection.class_filter);
  out["geometry"] = geometry_json(trip_geometry(ids, b.trips, b.graph));
  if (ids.empty()) {
    out["importance"] = nullptr;
    out["evaluation"] = nullptr;
    if (request.detail_feature) out["feature_detail"] = nullptr;
    return out;
  }
  out["importance"] =
      importance_json(importance(ids, b.trips, b.attributions, request.group_by));
  out["evaluation"] = evaluation_json(evaluate(ids, b.trips));
  if (request.detail_feature) {
    out["feature_detail"] = feature_detail_json(
        feature_detail(ids, b.trips, *request.detail_feature, request.bins));
  }
  return out;
}

Json dataset_summary_json(const DatasetBundle& b) {
  return {{"id", b.id},
          {"n_nodes", b.graph.node_count()},
          {"n_edges", b.graph.edge_count()},
          {"n_trips", b.trips.size()},
          {"n_features", b.trips.feature_count()},
          {"n_components", b.ordering.components.size()}};
}

Json ordering_json(const DatasetBundle& b) {
  const FiedlerOrdering& o = b.ordering;
  Json components = Json::array();
  for (std::size_t c = 0; c < o.components.size(); ++c) {
    const auto& comp = o.components[c];
    components.push_back({{"component", c},
                          {"size", comp.members.size()},
                          {"first_rank", comp.first_rank},
                          {"lambda2", optional_number(comp.lambda2)}});
  }
  Json nodes = Json::array();
  for (std::size_t i = 0; i < o.size(); ++i) {
    const Point& p = b.graph.position(i);
    nodes.push_back({{"node_id", o.node_ids[i]},
                     {"rank", o.rank[i]},
                     {"component", o.component[i]},
                     {"fiedler_value", o.fiedler_value[i]},
                     {"x", p.x},
                     {"y", p.y}});
  }
  return {{"n", o.size()}, {"components", components}, {"nodes", nodes}};
}

Json points_json(const DatasetBundle& b, ClassFilter filter) {
  Json ids = Json::array();
  Json xs = Json::array();
  Json ys = Json::array();
  Json labels = Json::array();
  Json predicted = Json::array();
  for (std::size_t r = 0; r < b.points.size(); ++r) {
    const Trip& t = b.trips.trip(r);
    if (!passes(filter, t.label)) continue;
    ids.push_back(t.id);
    xs.push_back(b.points[r].x);
    ys.push_back(b.points[r].y);
    labels.push_back(t.label);
    predicted.push_back(t.predicted);
  }
  return {{"n", b.ordering.size()},
          {"class_filter", class_filter_name(filter)},
          {"count", ids.size()},
          {"trip_id", ids},
          {"x", xs},
          {"y", ys},
          {"label", labels},
          {"predicted", predicted}};
}

Json grid_json(const OdMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.resolution; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.resolution; ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return {{"resolution", m.resolution},
          {"n", m.n},
          {"class_filter", class_filter_name(m.class_filter)},
          {"total", m.total()},
          {"cells", rows}};
}

Json features_json(const DatasetBundle& b) {
  Json out = Json::array();
  for (std::size_t f = 0; f < b.trips.feature_count(); ++f) {
    const FeatureColumn& c = b.trips.feature(f);
    Json item = {{"name", c.meta.name}, {"kind", feature_kind_name(c.meta.kind)}};
    if (c.meta.kind == FeatureKind::kDiscrete) item["categories"] = c.categories;
    out.push_back(std::move(item));
  }
  return out;
}

Json error_json(ErrorCode code, const std::string& message) {
  return {{"code", error_code_name(code)}, {"message", message}};
}

}  // namespace odflow
