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

#ifndef ODFLOW_EXPLAIN_HPP_
#define ODFLOW_EXPLAIN_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odflow/trips.hpp"

namespace odflow {

// Per-trip Shapley attributions toward the positive class, row-major and
// aligned with the rows of the TripTable they were built for.
class AttributionTable {
 public:
  AttributionTable() = default;
  // Throws Error(kIntegrity) unless phi.size() == t.size() * t.feature_count().
  AttributionTable(const TripTable& t, std::vector<double> phi);

  std::size_t feature_count() const { return m_; }
  std::size_t size() const { return rows_; }
  std::span<const double> values() const { return phi_; }
  std::span<const double> row(std::size_t r) const {
    return {phi_.data() + r * m_, m_};
  }

 private:
  std::size_t m_ = 0;
  std::size_t rows_ = 0;
  std::vector<double> phi_;
};

// `trip_id,<feature_1>,...` in feature order; every trip exactly once.
AttributionTable load_attributions(std::istream& in, const TripTable& t);
void write_attributions(const AttributionTable& a, const TripTable& t,
                        std::ostream& out);

// Which label partitions a selection into the two classes. Ground truth is
// the default; predictions are offered as an explicit alternative.
enum class GroupBy { kLabel, kPredicted };

std::optional<GroupBy> parse_group_by(std::string_view text);
std::string_view group_by_name(GroupBy g);

struct FeatureImportance {
  std::string name;
  // Mean |phi| over the class's selected trips; absent when the class has no
  // trips in the selection.
  std::array<std::optional<double>, 2> mean_abs;
};

struct ImportanceReport {
  GroupBy group_by = GroupBy::kLabel;
  std::array<std::size_t, 2> support{0, 0};
  // Descending by the larger of the two class means; ties keep feature order.
  std::vector<FeatureImportance> features;
};

// Throws Error(kEmptySelection) for empty `ids`, Error(kLookup) for ids not
// in the table.
ImportanceReport importance(std::span<const TripId> ids, const TripTable& t,
                            const AttributionTable& a,
                            GroupBy group_by = GroupBy::kLabel);

struct ClassEvaluation {
  std::size_t support = 0;
  std::size_t hits = 0;
  // Percentages of support; absent when support is zero.
  std::optional<double> hit_pct;
  std::optional<double> miss_pct;
};

struct EvaluationReport {
  std::array<ClassEvaluation, 2> classes;
};

// Hits are trips whose prediction equals the true label, grouped by true label.
EvaluationReport evaluate(std::span<const TripId> ids, const TripTable& t);

inline constexpr std::size_t kDefaultHistogramBins = 20;

// Distribution of one feature for both classes on a shared axis: category
// frequencies over the feature's full vocabulary for discrete features,
// equal-width histograms over the selection's combined range for continuous
// ones. A zero-width range becomes one bin of width 1 centred on the value.
struct FeatureDetail {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<std::string> categories;  // discrete
  std::vector<double> edges;            // continuous, bins + 1 entries
  std::array<std::vector<std::uint64_t>, 2> counts;
  std::array<std::size_t, 2> support{0, 0};
};

// Classes follow true labels. Throws Error(kLookup) for unknown features,
// Error(kEmptySelection) for empty `ids`, Error(kInvalidArgument) for
// bins == 0.
FeatureDetail feature_detail(std::span<const TripId> ids, const TripTable& t,
                             std::string_view feature,
                             std::size_t bins = kDefaultHistogramBins);

// f(x) = weights . x + bias.
double linear_model(std::span<const double> weights, double bias,
                    std::span<const double> x);

// Exact Shapley values of a linear model under mean imputation:
// phi_i = w_i (x_i - background_i). Throws Error(kInvalidArgument) when the
// three vectors differ in length.
std::vector<double> linear_shapley(std::span<const double> weights, double bias,
                                   std::span<const double> background_mean,
                                   std::span<const double> x);

}  // namespace odflow

#endif  // ODFLOW_EXPLAIN_HPP_
