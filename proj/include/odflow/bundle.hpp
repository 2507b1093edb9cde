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

#ifndef ODFLOW_BUNDLE_HPP_
#define ODFLOW_BUNDLE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "odflow/explain.hpp"
#include "odflow/graph.hpp"
#include "odflow/odplot.hpp"
#include "odflow/selection.hpp"
#include "odflow/spectral.hpp"
#include "odflow/trips.hpp"

namespace odflow {

// File names inside a bundle directory.
namespace bundle_files {
inline constexpr const char* kNodes = "nodes.csv";
inline constexpr const char* kEdges = "edges.csv";
inline constexpr const char* kTrips = "trips.csv";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kFeatureMeta = "feature_meta.json";
inline constexpr const char* kAttributions = "attributions.csv";
inline constexpr const char* kOrdering = "ordering.csv";  // optional
}  // namespace bundle_files

// Everything one dataset needs, cross-checked and with the ordering and the
// OD-plot points precomputed. Immutable once built.
struct DatasetBundle {
  std::string id;
  SpatialGraph graph;
  FiedlerOrdering ordering;
  TripTable trips;
  AttributionTable attributions;
  std::vector<OdPoint> points;  // aligned with trips rows
};

// Checks trips against the graph, computes the ordering when absent and
// projects the trips. Throws Error(kIntegrity) on any cross-reference
// mismatch.
DatasetBundle make_bundle(std::string id, SpatialGraph graph, TripTable trips,
                          AttributionTable attributions,
                          std::optional<FiedlerOrdering> ordering = std::nullopt,
                          const SolverOptions& options = {});

// Reads a bundle directory; the id is the directory name.
DatasetBundle load_bundle(const std::filesystem::path& dir,
                          const SolverOptions& options = {});

// Every immediate subdirectory holding a nodes.csv, sorted by name.
std::vector<DatasetBundle> load_bundles(const std::filesystem::path& data_dir,
                                        const SolverOptions& options = {});

// Writes all bundle files; ordering.csv only when `with_ordering`.
void write_bundle(const DatasetBundle& b, const std::filesystem::path& dir,
                  bool with_ordering);

}  // namespace odflow

#endif  // ODFLOW_BUNDLE_HPP_
