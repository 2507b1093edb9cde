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

#ifndef ODFLOW_TRIPS_HPP_
#define ODFLOW_TRIPS_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "odflow/graph.hpp"
#include "odflow/selection.hpp"

namespace odflow {

struct Trip {
  TripId id = 0;
  NodeId origin = 0;
  NodeId dest = 0;
  std::uint8_t label = 0;      // ground truth class, 0 or 1
  std::uint8_t predicted = 0;  // classifier output, 0 or 1
  friend bool operator==(const Trip&, const Trip&) = default;
};

enum class FeatureKind { kDiscrete, kContinuous };

std::string_view feature_kind_name(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view text);

struct FeatureMeta {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  friend bool operator==(const FeatureMeta&, const FeatureMeta&) = default;
};

// One feature across all trips. Continuous features fill `values`; discrete
// ones fill `codes`, indices into the lexicographically sorted `categories`.
struct FeatureColumn {
  FeatureMeta meta;
  std::vector<double> values;
  std::vector<std::uint32_t> codes;
  std::vector<std::string> categories;

  static FeatureColumn continuous(std::string name, std::vector<double> values);
  static FeatureColumn discrete(std::string name,
                                std::span<const std::string> raw);

  std::size_t size() const {
    return meta.kind == FeatureKind::kContinuous ? values.size() : codes.size();
  }
  // Cell rendered the way the features file stores it.
  std::string cell(std::size_t row) const;
};

// Trips sorted by trip_id with per-trip feature values. Row r of every
// feature column belongs to trips()[r].
class TripTable {
 public:
  TripTable() = default;

  // Columns are aligned with `trips` as given; rows are reordered by id.
  // Throws Error(kIntegrity) for duplicate ids, labels outside {0,1} or
  // columns whose length differs from the trip count.
  TripTable(std::vector<Trip> trips, std::vector<FeatureColumn> columns);

  std::size_t size() const { return trips_.size(); }
  std::span<const Trip> trips() const { return trips_; }
  const Trip& trip(std::size_t row) const { return trips_[row]; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  std::span<const std::uint8_t> predictions() const { return predicted_; }

  std::size_t feature_count() const { return columns_.size(); }
  const FeatureColumn& feature(std::size_t f) const { return columns_[f]; }
  std::optional<std::size_t> feature_index(std::string_view name) const;
  std::vector<FeatureMeta> feature_meta() const;

  std::optional<std::size_t> row_of(TripId id) const;

  // Rows for `ids`; throws Error(kLookup) naming the first unknown trip_id.
  std::vector<std::size_t> rows_of(std::span<const TripId> ids) const;

  // Throws Error(kIntegrity) listing trips whose origin or destination is not
  // a node of `g`.
  void check_nodes(const SpatialGraph& g) const;

 private:
  std::vector<Trip> trips_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::uint8_t> predicted_;
  std::vector<FeatureColumn> columns_;
  std::unordered_map<TripId, std::size_t> row_;
};

// `trips` is `trip_id,origin,dest,label,predicted`; `features` is
// `trip_id,<feature_1>,...` in the order of `meta_json`, a JSON array of
// {name, kind}. Both files must cover the same trip ids.
TripTable load_trip_table(std::istream& trips, std::istream& features,
                          std::string_view meta_json);

std::vector<FeatureMeta> parse_feature_meta(std::string_view json_text);
std::string feature_meta_json(std::span<const FeatureMeta> meta);

void write_trips(const TripTable& t, std::ostream& out);
void write_features(const TripTable& t, std::ostream& out);

// "missing trip_ids [..]" style helper for integrity errors. Lists at most
// `limit` ids followed by the total count.
std::string describe_ids(std::string_view what, std::span<const TripId> ids,
                         std::size_t limit = 20);

}  // namespace odflow

#endif  // ODFLOW_TRIPS_HPP_
