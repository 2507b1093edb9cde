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

#include "odflow/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "odflow/error.hpp"

namespace odflow {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + p.string());
  return in;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in = open_input(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

DatasetBundle make_bundle(std::string id, SpatialGraph graph, TripTable trips,
                          AttributionTable attributions,
                          std::optional<FiedlerOrdering> ordering,
                          const SolverOptions& options) {
  trips.check_nodes(graph);
  if (attributions.size() != trips.size() ||
      attributions.feature_count() != trips.feature_count()) {
    throw Error(ErrorCode::kIntegrity,
                "attributions do not match the trip table of bundle " + id);
  }
  DatasetBundle b;
  b.id = std::move(id);
  if (ordering) {
    if (ordering->node_ids.size() != graph.node_count() ||
        !std::equal(ordering->node_ids.begin(), ordering->node_ids.end(),
                    graph.node_ids().begin())) {
      throw Error(ErrorCode::kIntegrity,
                  "ordering of bundle " + b.id + " was built for another graph");
    }
    b.ordering = std::move(*ordering);
  } else {
    b.ordering = order_nodes(graph, build_laplacian(graph), options);
  }
  b.graph = std::move(graph);
  b.trips = std::move(trips);
  b.attributions = std::move(attributions);
  b.points = project_trips(b.trips, b.ordering);
  return b;
}

DatasetBundle load_bundle(const fs::path& dir, const SolverOptions& options) {
  using namespace bundle_files;
  SpatialGraph graph = load_graph(dir / kNodes, dir / kEdges);

  std::ifstream trips_in = open_input(dir / kTrips);
  std::ifstream features_in = open_input(dir / kFeatures);
  TripTable trips =
      load_trip_table(trips_in, features_in, slurp(dir / kFeatureMeta));

  std::ifstream attr_in = open_input(dir / kAttributions);
  AttributionTable attributions = load_attributions(attr_in, trips);

  std::optional<FiedlerOrdering> ordering;
  if (fs::exists(dir / kOrdering)) {
    std::ifstream in = open_input(dir / kOrdering);
    ordering = read_ordering(in, graph, (dir / kOrdering).string());
  }

  std::string id = fs::absolute(dir).lexically_normal().filename().string();
  if (id.empty()) {
    id = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  }
  return make_bundle(std::move(id), std::move(graph), std::move(trips),
                     std::move(attributions), std::move(ordering), options);
}

std::vector<DatasetBundle> load_bundles(const fs::path& data_dir,
                                        const SolverOptions& options) {
  if (!fs::is_directory(data_dir)) {
    throw Error(ErrorCode::kIo, data_dir.string() + " is not a directory");
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / bundle_files::kNodes)) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<DatasetBundle> bundles;
  for (const auto& d : dirs) bundles.push_back(load_bundle(d, options));
  return bundles;
}

void write_bundle(const DatasetBundle& b, const fs::path& dir,
                  bool with_ordering) {
  using namespace bundle_files;
  fs::create_directories(dir);
  {
    auto out = open_output(dir / kNodes);
    write_nodes(b.graph, out);
  }
  {
    auto out = open_output(dir / kEdges);
    write_edges(b.graph, out);
  }
  {
    auto out = open_output(dir / kTrips);
    write_trips(b.trips, out);
  }
  {
    auto out = open_output(dir / kFeatures);
    write_features(b.trips, out);
  }
  {
    auto out = open_output(dir / kFeatureMeta);
    out << feature_meta_json(b.trips.feature_meta());
  }
  {
    auto out = open_output(dir / kAttributions);
    write_attributions(b.attributions, b.trips, out);
  }
  if (with_ordering) {
    auto out = open_output(dir / kOrdering);
    write_ordering(b.ordering, out);
  }
}

}  // namespace odflow
