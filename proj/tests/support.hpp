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

// Fixtures and independent oracles shared by the unit and acceptance tests.
// Nothing here calls into the code under test to compute expected values.

#ifndef ODFLOW_TESTS_SUPPORT_HPP_
#define ODFLOW_TESTS_SUPPORT_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "odflow/bundle.hpp"
#include "odflow/error.hpp"

namespace odflow::testing {

using Rng = std::mt19937_64;

// Code of the odflow::Error thrown by `f`, or nullopt if it returns.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

SpatialGraph path_graph(std::size_t n, double length = 1.0);

// Random spanning tree plus `extra` random chords. Node ids are 3i + 7 so
// that ids never coincide with dense indices.
SpatialGraph random_connected_graph(Rng& rng, std::size_t n, std::size_t extra,
                                    double min_length = 0.1,
                                    double max_length = 10.0);

// Dense Laplacian assembled straight from the edge list.
Eigen::MatrixXd dense_laplacian(const SpatialGraph& g);

struct EigenOracle {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};
EigenOracle eigen_oracle(const SpatialGraph& g);

// Ranks by ascending value, ties by ascending id, from a plain sort.
std::vector<std::uint32_t> oracle_ranks(const std::vector<double>& values,
                                        std::span<const NodeId> ids);

bool same_or_reversed(const std::vector<std::uint32_t>& a,
                      const std::vector<std::uint32_t>& b);

// Uniform unit vector orthogonal to the constant vector.
std::vector<double> random_unit_perp(Rng& rng, std::size_t n);

struct BundleShape {
  std::size_t nodes = 40;
  std::size_t extra_edges = 30;
  std::size_t trips = 300;
  std::size_t continuous = 3;
  std::size_t discrete = 2;
  double class1_fraction = 0.3;
};

// Random graph, trips, features and attributions with gapped trip ids.
DatasetBundle random_bundle(Rng& rng, const BundleShape& shape,
                            std::string id = "random");

// Even-odd membership by an upward vertical ray, with explicit on-segment
// check. Deliberately a different construction from the library's.
bool oracle_in_polygon(const std::vector<PlotCoord>& poly, double x, double y);

// Membership of (x, y) in any shape, written from the definitions.
bool oracle_contains(const Shape& shape, double x, double y);

// Random shape over an n x n rank plot: rectangles, bands and polygons
// (possibly self-intersecting), mixing integer and fractional coordinates so
// that boundary hits occur.
Selection random_selection(Rng& rng, std::size_t n);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

}  // namespace odflow::testing

#endif  // ODFLOW_TESTS_SUPPORT_HPP_
