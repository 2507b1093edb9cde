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

#include "odflow/trips.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "odflow/csv.hpp"
#include "odflow/error.hpp"

namespace odflow {

std::string_view feature_kind_name(FeatureKind kind) {
  return kind == FeatureKind::kDiscrete ? "discrete" : "continuous";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view text) {
  if (text == "discrete") return FeatureKind::kDiscrete;
  if (text == "continuous") return FeatureKind::kContinuous;
  return std::nullopt;
}

FeatureColumn FeatureColumn::continuous(std::string name,
                                        std::vector<double> values) {
  FeatureColumn c;
  c.meta = {std::move(name), FeatureKind::kContinuous};
  c.values = std::move(values);
  return c;
}

FeatureColumn FeatureColumn::discrete(std::string name,
                                      std::span<const std::string> raw) {
  FeatureColumn c;
  c.meta = {std::move(name), FeatureKind::kDiscrete};
  std::set<std::string> unique(raw.begin(), raw.end());
  c.categories.assign(unique.begin(), unique.end());
  c.codes.reserve(raw.size());
  for (const auto& v : raw) {
    const auto it = std::lower_bound(c.categories.begin(), c.categories.end(), v);
    c.codes.push_back(static_cast<std::uint32_t>(it - c.categories.begin()));
  }
  return c;
}

std::string FeatureColumn::cell(std::size_t row) const {
  if (meta.kind == FeatureKind::kContinuous) {
    return csv::format_double(values[row]);
  }
  return categories[codes[row]];
}

std::string describe_ids(std::string_view what, std::span<const TripId> ids,
                         std::size_t limit) {
  std::ostringstream out;
  out << what << " [";
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out << ',';
    out << ids[i];
  }
  if (ids.size() > limit) out << ",...";
  out << "] (" << ids.size() << " total)";
  return out.str();
}

TripTable::TripTable(std::vector<Trip> trips, std::vector<FeatureColumn> columns) {
  for (const auto& c : columns) {
    if (c.size() != trips.size()) {
      throw Error(ErrorCode::kIntegrity,
                  "feature '" + c.meta.name + "' has " +
                      std::to_string(c.size()) + " values for " +
                      std::to_string(trips.size()) + " trips");
    }
  }
  std::vector<std::size_t> order(trips.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return trips[a].id < trips[b].id;
  });

  std::vector<TripId> duplicates;
  std::vector<TripId> bad_labels;
  trips_.reserve(trips.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Trip& t = trips[order[k]];
    if (k > 0 && trips_.back().id == t.id) duplicates.push_back(t.id);
    if (t.label > 1 || t.predicted > 1) bad_labels.push_back(t.id);
    trips_.push_back(t);
    labels_.push_back(t.label);
    predicted_.push_back(t.predicted);
    row_.emplace(t.id, k);
  }
  if (!duplicates.empty()) {
    throw Error(ErrorCode::kIntegrity, describe_ids("duplicate trip_ids", duplicates));
  }
  if (!bad_labels.empty()) {
    throw Error(ErrorCode::kIntegrity,
                describe_ids("labels outside {0,1} for trip_ids", bad_labels));
  }

  columns_.reserve(columns.size());
  for (auto& c : columns) {
    FeatureColumn sorted;
    sorted.meta = std::move(c.meta);
    sorted.categories = std::move(c.categories);
    if (sorted.meta.kind == FeatureKind::kContinuous) {
      sorted.values.reserve(order.size());
      for (std::size_t r : order) sorted.values.push_back(c.values[r]);
    } else {
      sorted.codes.reserve(order.size());
      for (std::size_t r : order) sorted.codes.push_back(c.codes[r]);
    }
    columns_.push_back(std::move(sorted));
  }
}

std::optional<std::size_t> TripTable::feature_index(std::string_view name) const {
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    if (columns_[f].meta.name == name) return f;
  }
  return std::nullopt;
}

std::vector<FeatureMeta> TripTable::feature_meta() const {
  std::vector<FeatureMeta> meta;
  for (const auto& c : columns_) meta.push_back(c.meta);
  return meta;
}

std::optional<std::size_t> TripTable::row_of(TripId id) const {
  const auto it = row_.find(id);
  if (it == row_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> TripTable::rows_of(std::span<const TripId> ids) const {
  std::vector<std::size_t> rows;
  rows.reserve(ids.size());
  for (TripId id : ids) {
    const auto r = row_of(id);
    if (!r) throw Error(ErrorCode::kLookup, "unknown trip_id " + std::to_string(id));
    rows.push_back(*r);
  }
  return rows;
}

void TripTable::check_nodes(const SpatialGraph& g) const {
  std::vector<TripId> bad;
  for (const Trip& t : trips_) {
    if (!g.index_of(t.origin) || !g.index_of(t.dest)) bad.push_back(t.id);
  }
  if (!bad.empty()) {
    throw Error(ErrorCode::kIntegrity,
                describe_ids("trips referencing unknown nodes, trip_ids", bad));
  }
}

std::vector<FeatureMeta> parse_feature_meta(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("feature_meta.json: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kParse, "feature_meta.json: expected an array");
  }
  std::vector<FeatureMeta> meta;
  std::set<std::string> names;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("name") || !item.contains("kind") ||
        !item["name"].is_string() || !item["kind"].is_string()) {
      throw Error(ErrorCode::kParse,
                  "feature_meta.json: entries must be {name, kind} strings");
    }
    const auto kind = parse_feature_kind(item["kind"].get<std::string>());
    if (!kind) {
      throw Error(ErrorCode::kParse,
                  "feature_meta.json: kind must be discrete or continuous");
    }
    std::string name = item["name"].get<std::string>();
    if (name.empty() || name == "trip_id" || !names.insert(name).second) {
      throw Error(ErrorCode::kParse,
                  "feature_meta.json: invalid or duplicate name '" + name + "'");
    }
    meta.push_back(FeatureMeta{std::move(name), *kind});
  }
  return meta;
}

std::string feature_meta_json(std::span<const FeatureMeta> meta) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& m : meta) {
    doc.push_back({{"name", m.name}, {"kind", feature_kind_name(m.kind)}});
  }
  return doc.dump(2) + "\n";
}

TripTable load_trip_table(std::istream& trips_in, std::istream& features_in,
                          std::string_view meta_json) {
  static constexpr std::array<std::string_view, 5> kTripHeader{
      "trip_id", "origin", "dest", "label", "predicted"};

  const std::vector<FeatureMeta> meta = parse_feature_meta(meta_json);

  csv::Reader reader(trips_in, "trips.csv");
  reader.expect_header(kTripHeader);
  std::vector<Trip> trips;
  std::vector<std::string> f;
  const auto to_class = [&](const std::string& cell, std::string_view column) {
    const std::int64_t v = reader.to_int(cell, column);
    if (v != 0 && v != 1) reader.fail(std::string(column) + " must be 0 or 1");
    return static_cast<std::uint8_t>(v);
  };
  while (reader.next(f)) {
    trips.push_back(Trip{reader.to_int(f[0], "trip_id"),
                         reader.to_int(f[1], "origin"),
                         reader.to_int(f[2], "dest"), to_class(f[3], "label"),
                         to_class(f[4], "predicted")});
  }

  csv::Reader freader(features_in, "features.csv");
  std::vector<std::string_view> header{"trip_id"};
  for (const auto& m : meta) header.push_back(m.name);
  freader.expect_header(header);

  std::unordered_map<TripId, std::size_t> trip_pos;
  for (std::size_t i = 0; i < trips.size(); ++i) trip_pos.emplace(trips[i].id, i);

  std::vector<std::vector<std::string>> cells(trips.size());
  std::vector<std::size_t> cell_line(trips.size(), 0);
  std::vector<TripId> unexpected;
  while (freader.next(f)) {
    const TripId id = freader.to_int(f[0], "trip_id");
    const auto it = trip_pos.find(id);
    if (it == trip_pos.end()) {
      unexpected.push_back(id);
      continue;
    }
    if (!cells[it->second].empty()) {
      freader.fail("duplicate trip_id " + std::to_string(id));
    }
    cell_line[it->second] = freader.line();
    cells[it->second].assign(f.begin() + 1, f.end());
  }
  std::vector<TripId> missing;
  for (std::size_t i = 0; i < trips.size(); ++i) {
    if (cells[i].empty() && !meta.empty()) missing.push_back(trips[i].id);
  }
  if (!missing.empty() || !unexpected.empty()) {
    std::sort(missing.begin(), missing.end());
    std::sort(unexpected.begin(), unexpected.end());
    std::string msg = "features.csv does not match trips.csv:";
    if (!missing.empty()) msg += " " + describe_ids("missing trip_ids", missing);
    if (!unexpected.empty()) {
      msg += " " + describe_ids("unexpected trip_ids", unexpected);
    }
    throw Error(ErrorCode::kIntegrity, msg);
  }

  std::vector<FeatureColumn> columns;
  for (std::size_t k = 0; k < meta.size(); ++k) {
    if (meta[k].kind == FeatureKind::kContinuous) {
      std::vector<double> values(trips.size());
      for (std::size_t i = 0; i < trips.size(); ++i) {
        const auto v = csv::parse_double(cells[i][k]);
        if (!v) {
          throw Error(ErrorCode::kParse,
                      "features.csv:" + std::to_string(cell_line[i]) +
                          ": column '" + meta[k].name +
                          "': not a finite number: '" + cells[i][k] + "'");
        }
        values[i] = *v;
      }
      columns.push_back(FeatureColumn::continuous(meta[k].name, std::move(values)));
    } else {
      std::vector<std::string> raw(trips.size());
      for (std::size_t i = 0; i < trips.size(); ++i) raw[i] = cells[i][k];
      columns.push_back(FeatureColumn::discrete(meta[k].name, raw));
    }
  }
  return TripTable(std::move(trips), std::move(columns));
}

void write_trips(const TripTable& t, std::ostream& out) {
  out << "trip_id,origin,dest,label,predicted\n";
  for (const Trip& trip : t.trips()) {
    out << trip.id << ',' << trip.origin << ',' << trip.dest << ','
        << int{trip.label} << ',' << int{trip.predicted} << '\n';
  }
}

void write_features(const TripTable& t, std::ostream& out) {
  out << "trip_id";
  for (std::size_t f = 0; f < t.feature_count(); ++f) {
    out << ',' << csv::escape_field(t.feature(f).meta.name);
  }
  out << '\n';
  for (std::size_t r = 0; r < t.size(); ++r) {
    out << t.trip(r).id;
    for (std::size_t f = 0; f < t.feature_count(); ++f) {
      out << ',' << csv::escape_field(t.feature(f).cell(r));
    }
    out << '\n';
  }
}

}  // namespace odflow
