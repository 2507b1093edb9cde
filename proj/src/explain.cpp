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

#include "odflow/explain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "odflow/csv.hpp"
#include "odflow/error.hpp"
#include "odflow/kernels.hpp"

namespace odflow {

AttributionTable::AttributionTable(const TripTable& t, std::vector<double> phi)
    : m_(t.feature_count()), rows_(t.size()), phi_(std::move(phi)) {
  if (phi_.size() != t.size() * t.feature_count()) {
    throw Error(ErrorCode::kIntegrity,
                "attribution table has " + std::to_string(phi_.size()) +
                    " values, expected " +
                    std::to_string(t.size() * t.feature_count()));
  }
}

AttributionTable load_attributions(std::istream& in, const TripTable& t) {
  csv::Reader reader(in, "attributions.csv");
  std::vector<std::string_view> header{"trip_id"};
  const auto meta = t.feature_meta();
  for (const auto& m : meta) header.push_back(m.name);
  reader.expect_header(header);

  const std::size_t m = meta.size();
  std::vector<double> phi(t.size() * m, 0.0);
  std::vector<bool> seen(t.size(), false);
  std::vector<TripId> unexpected;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const TripId id = reader.to_int(f[0], "trip_id");
    const auto row = t.row_of(id);
    if (!row) {
      unexpected.push_back(id);
      continue;
    }
    if (seen[*row]) reader.fail("duplicate trip_id " + std::to_string(id));
    seen[*row] = true;
    for (std::size_t k = 0; k < m; ++k) {
      phi[*row * m + k] = reader.to_double(f[k + 1], meta[k].name);
    }
  }
  std::vector<TripId> missing;
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (!seen[r]) missing.push_back(t.trip(r).id);
  }
  if (!missing.empty() || !unexpected.empty()) {
    std::sort(unexpected.begin(), unexpected.end());
    std::string msg = "attributions.csv does not match trips.csv:";
    if (!missing.empty()) msg += " " + describe_ids("missing trip_ids", missing);
    if (!unexpected.empty()) {
      msg += " " + describe_ids("unexpected trip_ids", unexpected);
    }
    throw Error(ErrorCode::kIntegrity, msg);
  }
  return AttributionTable(t, std::move(phi));
}

void write_attributions(const AttributionTable& a, const TripTable& t,
                        std::ostream& out) {
  out << "trip_id";
  for (std::size_t f = 0; f < t.feature_count(); ++f) {
    out << ',' << csv::escape_field(t.feature(f).meta.name);
  }
  out << '\n';
  for (std::size_t r = 0; r < t.size(); ++r) {
    out << t.trip(r).id;
    for (double v : a.row(r)) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

std::optional<GroupBy> parse_group_by(std::string_view text) {
  if (text == "label") return GroupBy::kLabel;
  if (text == "predicted") return GroupBy::kPredicted;
  return std::nullopt;
}

std::string_view group_by_name(GroupBy g) {
  return g == GroupBy::kLabel ? "label" : "predicted";
}

namespace {

void require_nonempty(std::span<const TripId> ids) {
  if (ids.empty()) {
    throw Error(ErrorCode::kEmptySelection, "selection contains no trips");
  }
}

}  // namespace

ImportanceReport importance(std::span<const TripId> ids, const TripTable& t,
                            const AttributionTable& a, GroupBy group_by) {
  require_nonempty(ids);
  const std::vector<std::size_t> rows = t.rows_of(ids);
  const std::size_t m = a.feature_count();
  const auto group =
      group_by == GroupBy::kLabel ? t.labels() : t.predictions();
  const kernels::ClassAbsSums sums =
      kernels::parallel::class_abs_sums(a.values(), m, rows, group);

  ImportanceReport report;
  report.group_by = group_by;
  report.support = sums.counts;
  report.features.resize(m);
  std::vector<double> key(m, -1.0);
  for (std::size_t f = 0; f < m; ++f) {
    report.features[f].name = t.feature(f).meta.name;
    for (std::size_t c = 0; c < 2; ++c) {
      if (sums.counts[c] == 0) continue;
      const double mean = sums.sums[c][f] / static_cast<double>(sums.counts[c]);
      report.features[f].mean_abs[c] = mean;
      key[f] = std::max(key[f], mean);
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return key[x] > key[y]; });
  std::vector<FeatureImportance> sorted;
  sorted.reserve(m);
  for (std::size_t f : order) sorted.push_back(std::move(report.features[f]));
  report.features = std::move(sorted);
  return report;
}

EvaluationReport evaluate(std::span<const TripId> ids, const TripTable& t) {
  require_nonempty(ids);
  EvaluationReport report;
  for (std::size_t r : t.rows_of(ids)) {
    const Trip& trip = t.trip(r);
    auto& c = report.classes[trip.label];
    ++c.support;
    if (trip.predicted == trip.label) ++c.hits;
  }
  for (auto& c : report.classes) {
    if (c.support == 0) continue;
    const double support = static_cast<double>(c.support);
    c.hit_pct = 100.0 * static_cast<double>(c.hits) / support;
    c.miss_pct = 100.0 * static_cast<double>(c.support - c.hits) / support;
  }
  return report;
}

FeatureDetail feature_detail(std::span<const TripId> ids, const TripTable& t,
                             std::string_view feature, std::size_t bins) {
  const auto f = t.feature_index(feature);
  if (!f) {
    throw Error(ErrorCode::kLookup, "unknown feature '" + std::string(feature) + "'");
  }
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "bins must be >= 1");
  require_nonempty(ids);
  const std::vector<std::size_t> rows = t.rows_of(ids);
  const FeatureColumn& col = t.feature(*f);

  FeatureDetail d;
  d.name = col.meta.name;
  d.kind = col.meta.kind;
  for (std::size_t r : rows) ++d.support[t.trip(r).label];

  if (col.meta.kind == FeatureKind::kDiscrete) {
    d.categories = col.categories;
    for (auto& c : d.counts) c.assign(col.categories.size(), 0);
    for (std::size_t r : rows) ++d.counts[t.trip(r).label][col.codes[r]];
    return d;
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t r : rows) {
    lo = std::min(lo, col.values[r]);
    hi = std::max(hi, col.values[r]);
  }
  if (lo == hi) {
    d.edges = {lo - 0.5, lo + 0.5};
    d.counts[0] = {d.support[0]};
    d.counts[1] = {d.support[1]};
    return d;
  }
  const double width = hi - lo;
  d.edges.resize(bins + 1);
  for (std::size_t i = 0; i < bins; ++i) {
    d.edges[i] = lo + width * static_cast<double>(i) / static_cast<double>(bins);
  }
  d.edges[bins] = hi;
  for (auto& c : d.counts) c.assign(bins, 0);
  for (std::size_t r : rows) {
    const double pos = (col.values[r] - lo) / width * static_cast<double>(bins);
    const auto bin = std::min(bins - 1, static_cast<std::size_t>(pos));
    ++d.counts[t.trip(r).label][bin];
  }
  return d;
}

double linear_model(std::span<const double> weights, double bias,
                    std::span<const double> x) {
  if (weights.size() != x.size()) {
    throw Error(ErrorCode::kInvalidArgument, "dimension mismatch");
  }
  double y = bias;
  for (std::size_t i = 0; i < x.size(); ++i) y += weights[i] * x[i];
  return y;
}

std::vector<double> linear_shapley(std::span<const double> weights, double /*bias*/,
                                   std::span<const double> background_mean,
                                   std::span<const double> x) {
  if (weights.size() != x.size() || background_mean.size() != x.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "weights, background mean and instance differ in length");
  }
  std::vector<double> phi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    phi[i] = weights[i] * (x[i] - background_mean[i]);
  }
  return phi;
}

}  // namespace odflow
