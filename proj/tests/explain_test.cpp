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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "odflow/explain.hpp"
#include "support.hpp"

namespace odflow {
namespace {

using testing::error_of;

// Exact Shapley values of f(x) = w.x + b with absent features imputed by
// the background mean, summed over all coalitions.
std::vector<double> coalition_shapley(const std::vector<double>& w, double b,
                                      const std::vector<double>& mean,
                                      const std::vector<double>& x) {
  const std::size_t m = w.size();
  const auto value = [&](unsigned mask) {
    double f = b;
    for (std::size_t k = 0; k < m; ++k) f += w[k] * ((mask >> k) & 1u ? x[k] : mean[k]);
    return f;
  };
  std::vector<double> fact(m + 1, 1.0);
  for (std::size_t k = 1; k <= m; ++k) fact[k] = fact[k - 1] * static_cast<double>(k);
  std::vector<double> phi(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      if ((mask >> i) & 1u) continue;
      const auto s = static_cast<std::size_t>(std::popcount(mask));
      const double weight = fact[s] * fact[m - s - 1] / fact[m];
      phi[i] += weight * (value(mask | (1u << i)) - value(mask));
    }
  }
  return phi;
}

TripTable tiny_table(const std::vector<std::uint8_t>& labels,
                     const std::vector<std::uint8_t>& predicted,
                     std::vector<FeatureColumn> columns = {}) {
  std::vector<Trip> trips;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    trips.push_back({static_cast<TripId>(i + 1), 0, 0, labels[i], predicted[i]});
  }
  return TripTable(std::move(trips), std::move(columns));
}

std::vector<TripId> all_ids(const TripTable& t) {
  std::vector<TripId> ids;
  for (const Trip& trip : t.trips()) ids.push_back(trip.id);
  return ids;
}

TEST(Importance, MeanOfAbsoluteValues) {
  const TripTable t = tiny_table({1, 1}, {1, 1}, {FeatureColumn::continuous("f", {0, 0})});
  const AttributionTable a(t, {1.0, -3.0});
  const ImportanceReport r = importance(all_ids(t), t, a);
  ASSERT_EQ(r.features.size(), 1u);
  EXPECT_EQ(r.features[0].mean_abs[1], 2.0);
  EXPECT_FALSE(r.features[0].mean_abs[0].has_value());
  EXPECT_EQ(r.support, (std::array<std::size_t, 2>{0, 2}));
}

TEST(Importance, SortedByLargerClassMeanStableOnTies) {
  const TripTable t = tiny_table(
      {0, 1}, {0, 0},
      {FeatureColumn::continuous("a", {0, 0}), FeatureColumn::continuous("b", {0, 0}),
       FeatureColumn::continuous("c", {0, 0}), FeatureColumn::continuous("d", {0, 0})});
  // Row 1 (class 0): a=1 b=5 c=1 d=0; row 2 (class 1): a=0.5 b=0 c=-1 d=4.
  const AttributionTable a(t, {1, 5, 1, 0, 0.5, 0, -1, 4});
  const ImportanceReport r = importance(all_ids(t), t, a);
  std::vector<std::string> names;
  for (const auto& f : r.features) names.push_back(f.name);
  EXPECT_EQ(names, (std::vector<std::string>{"b", "d", "a", "c"}));
}

TEST(Importance, OnlyClassZeroLeavesClassOneAbsent) {
  testing::Rng rng(1);
  const DatasetBundle b = testing::random_bundle(rng, {});
  std::vector<TripId> ids;
  for (const Trip& t : b.trips.trips()) {
    if (t.label == 0) ids.push_back(t.id);
  }
  const ImportanceReport r = importance(ids, b.trips, b.attributions);
  for (const auto& f : r.features) {
    EXPECT_TRUE(f.mean_abs[0].has_value());
    EXPECT_FALSE(f.mean_abs[1].has_value());
  }
}

TEST(Importance, MatchesBruteForceAndBounds) {
  testing::Rng rng(3);
  const DatasetBundle b = testing::random_bundle(rng, {.trips = 600});
  const std::size_t m = b.trips.feature_count();
  std::bernoulli_distribution keep(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TripId> ids;
    for (const Trip& t : b.trips.trips()) {
      if (keep(rng)) ids.push_back(t.id);
    }
    if (ids.empty()) continue;
    std::array<std::vector<double>, 2> sum{std::vector<double>(m), std::vector<double>(m)};
    std::array<std::vector<double>, 2> max{std::vector<double>(m), std::vector<double>(m)};
    std::array<std::size_t, 2> count{0, 0};
    for (TripId id : ids) {
      const std::size_t row = *b.trips.row_of(id);
      const int c = b.trips.trip(row).label;
      ++count[c];
      for (std::size_t f = 0; f < m; ++f) {
        const double v = std::abs(b.attributions.row(row)[f]);
        sum[c][f] += v;
        max[c][f] = std::max(max[c][f], v);
      }
    }
    const ImportanceReport r = importance(ids, b.trips, b.attributions);
    for (const auto& fi : r.features) {
      const std::size_t f = *b.trips.feature_index(fi.name);
      for (int c = 0; c < 2; ++c) {
        ASSERT_EQ(fi.mean_abs[c].has_value(), count[c] > 0);
        if (count[c] == 0) continue;
        EXPECT_NEAR(*fi.mean_abs[c], sum[c][f] / static_cast<double>(count[c]), 1e-12);
        EXPECT_GE(*fi.mean_abs[c], 0.0);
        EXPECT_LE(*fi.mean_abs[c], max[c][f]);
      }
    }
    // Order-free aggregation.
    std::vector<TripId> shuffled = ids;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const ImportanceReport again = importance(shuffled, b.trips, b.attributions);
    for (std::size_t k = 0; k < r.features.size(); ++k) {
      for (int c = 0; c < 2; ++c) {
        if (!r.features[k].mean_abs[c]) continue;
        EXPECT_NEAR(*again.features[k].mean_abs[c], *r.features[k].mean_abs[c], 1e-12);
      }
    }
  }
}

TEST(Importance, SingletonEqualsAbsolutePhi) {
  testing::Rng rng(4);
  const DatasetBundle b = testing::random_bundle(rng, {});
  const std::size_t row = 17;
  const std::vector<TripId> ids{b.trips.trip(row).id};
  const int c = b.trips.trip(row).label;
  for (const auto& fi : importance(ids, b.trips, b.attributions).features) {
    const std::size_t f = *b.trips.feature_index(fi.name);
    EXPECT_EQ(*fi.mean_abs[c], std::abs(b.attributions.row(row)[f]));
  }
}

TEST(Importance, GroupByPredicted) {
  const TripTable t = tiny_table({0, 0}, {1, 0}, {FeatureColumn::continuous("f", {0, 0})});
  const AttributionTable a(t, {4.0, -2.0});
  const ImportanceReport r = importance(all_ids(t), t, a, GroupBy::kPredicted);
  EXPECT_EQ(r.features[0].mean_abs[0], 2.0);
  EXPECT_EQ(r.features[0].mean_abs[1], 4.0);
  EXPECT_EQ(r.group_by, GroupBy::kPredicted);
}

TEST(Importance, Errors) {
  const TripTable t = tiny_table({0}, {0}, {FeatureColumn::continuous("f", {0})});
  const AttributionTable a(t, {1.0});
  EXPECT_EQ(error_of([&] { importance({}, t, a); }), ErrorCode::kEmptySelection);
  const std::vector<TripId> unknown{5};
  EXPECT_EQ(error_of([&] { importance(unknown, t, a); }), ErrorCode::kLookup);
  EXPECT_EQ(error_of([&] { AttributionTable(t, {1.0, 2.0}); }), ErrorCode::kIntegrity);
}

TEST(Evaluate, SevenOfTen) {
  const TripTable t = tiny_table(std::vector<std::uint8_t>(10, 0),
                                 {0, 0, 0, 0, 0, 0, 0, 1, 1, 1});
  const EvaluationReport r = evaluate(all_ids(t), t);
  EXPECT_EQ(r.classes[0].support, 10u);
  EXPECT_EQ(r.classes[0].hits, 7u);
  EXPECT_DOUBLE_EQ(*r.classes[0].hit_pct, 70.0);
  EXPECT_DOUBLE_EQ(*r.classes[0].miss_pct, 30.0);
  EXPECT_FALSE(r.classes[1].hit_pct.has_value());
}

TEST(Evaluate, AllCorrect) {
  const TripTable t = tiny_table({0, 1, 1}, {0, 1, 1});
  const EvaluationReport r = evaluate(all_ids(t), t);
  for (const auto& c : r.classes) {
    EXPECT_EQ(*c.hit_pct, 100.0);
    EXPECT_EQ(*c.miss_pct, 0.0);
  }
  EXPECT_EQ(error_of([&] { evaluate({}, t); }), ErrorCode::kEmptySelection);
}

TEST(Evaluate, CountingOracleAndDuplicationInvariance) {
  testing::Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> bit(0, 1);
    const std::size_t n = 1 + rng() % 200;
    std::vector<std::uint8_t> labels(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<std::uint8_t>(bit(rng));
      pred[i] = static_cast<std::uint8_t>(bit(rng));
    }
    const TripTable t = tiny_table(labels, pred);
    const EvaluationReport r = evaluate(all_ids(t), t);
    for (int c = 0; c < 2; ++c) {
      std::size_t support = 0, hits = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != c) continue;
        ++support;
        hits += pred[i] == labels[i];
      }
      EXPECT_EQ(r.classes[c].support, support);
      EXPECT_EQ(r.classes[c].hits, hits);
      if (support == 0) continue;
      EXPECT_EQ(*r.classes[c].hit_pct, 100.0 * hits / support);
      EXPECT_NEAR(*r.classes[c].hit_pct + *r.classes[c].miss_pct, 100.0, 1e-9);
    }
    std::vector<std::uint8_t> labels2 = labels, pred2 = pred;
    labels2.insert(labels2.end(), labels.begin(), labels.end());
    pred2.insert(pred2.end(), pred.begin(), pred.end());
    const TripTable doubled = tiny_table(labels2, pred2);
    const EvaluationReport r2 = evaluate(all_ids(doubled), doubled);
    for (int c = 0; c < 2; ++c) {
      if (!r.classes[c].hit_pct) continue;
      EXPECT_DOUBLE_EQ(*r2.classes[c].hit_pct, *r.classes[c].hit_pct);
    }
  }
}

TEST(FeatureDetail, DiscreteFrequencies) {
  const std::vector<std::string> raw{"A", "A", "B", "C"};
  const TripTable t = tiny_table({0, 0, 0, 1}, {0, 0, 0, 1},
                                 {FeatureColumn::discrete("kind", raw)});
  const std::vector<TripId> ids{1, 2, 3};
  const FeatureDetail d = feature_detail(ids, t, "kind");
  EXPECT_EQ(d.categories, (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(d.counts[0], (std::vector<std::uint64_t>{2, 1, 0}));
  EXPECT_EQ(d.counts[1], (std::vector<std::uint64_t>{0, 0, 0}));
  EXPECT_EQ(d.support, (std::array<std::size_t, 2>{3, 0}));
}

TEST(FeatureDetail, DegenerateRangeGetsUnitBin) {
  const TripTable t = tiny_table({0, 1, 1}, {0, 1, 1},
                                 {FeatureColumn::continuous("x", {4.0, 4.0, 4.0})});
  const FeatureDetail d = feature_detail(all_ids(t), t, "x");
  EXPECT_EQ(d.edges, (std::vector<double>{3.5, 4.5}));
  EXPECT_EQ(d.counts[0], (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(d.counts[1], (std::vector<std::uint64_t>{2}));
}

TEST(FeatureDetail, HistogramAgainstCountingOracle) {
  testing::Rng rng(6);
  const DatasetBundle b = testing::random_bundle(rng, {.trips = 500});
  std::bernoulli_distribution keep(0.4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TripId> ids;
    for (const Trip& t : b.trips.trips()) {
      if (keep(rng)) ids.push_back(t.id);
    }
    for (std::size_t f = 0; f < b.trips.feature_count(); ++f) {
      const FeatureColumn& col = b.trips.feature(f);
      const std::size_t bins = trial % 2 == 0 ? kDefaultHistogramBins : 7;
      const FeatureDetail d = feature_detail(ids, b.trips, col.meta.name, bins);
      for (int c = 0; c < 2; ++c) {
        const auto total = std::accumulate(d.counts[c].begin(), d.counts[c].end(), std::uint64_t{0});
        EXPECT_EQ(total, d.support[c]);
        EXPECT_EQ(d.counts[c].size(), d.counts[0].size());
      }
      if (col.meta.kind == FeatureKind::kDiscrete) {
        EXPECT_EQ(d.categories, col.categories);
        continue;
      }
      double lo = INFINITY, hi = -INFINITY;
      for (TripId id : ids) {
        const double v = col.values[*b.trips.row_of(id)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      ASSERT_EQ(d.edges.size(), bins + 1);
      EXPECT_EQ(d.edges.front(), lo);
      EXPECT_EQ(d.edges.back(), hi);
      std::array<std::vector<std::uint64_t>, 2> expected{std::vector<std::uint64_t>(bins),
                                                         std::vector<std::uint64_t>(bins)};
      for (TripId id : ids) {
        const std::size_t row = *b.trips.row_of(id);
        const double v = col.values[row];
        // Bin k holds [edge_k, edge_k+1); the top edge belongs to the last bin.
        std::size_t k = 0;
        while (k + 1 < bins && v >= d.edges[k + 1]) ++k;
        ++expected[b.trips.trip(row).label][k];
      }
      EXPECT_EQ(d.counts[0], expected[0]);
      EXPECT_EQ(d.counts[1], expected[1]);
    }
  }
}

TEST(FeatureDetail, Errors) {
  const TripTable t = tiny_table({0}, {0}, {FeatureColumn::continuous("x", {1.0})});
  const std::vector<TripId> ids{1};
  EXPECT_EQ(error_of([&] { feature_detail(ids, t, "nope"); }), ErrorCode::kLookup);
  EXPECT_EQ(error_of([&] { feature_detail(ids, t, "x", 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] { feature_detail({}, t, "x"); }), ErrorCode::kEmptySelection);
}

TEST(LinearShapley, TwoFeatureExample) {
  const std::vector<double> w{2, 3}, mean{0, 0}, x{1, 1};
  EXPECT_EQ(linear_shapley(w, 0.0, mean, x), (std::vector<double>{2, 3}));
  EXPECT_EQ(coalition_shapley(w, 0.0, mean, x), (std::vector<double>{2, 3}));
  EXPECT_EQ(linear_shapley(w, 1.5, mean, mean), (std::vector<double>{0, 0}));
}

TEST(LinearShapley, MatchesCoalitionEnumeration) {
  testing::Rng rng(10);
  std::uniform_real_distribution<double> u(-3, 3);
  for (std::size_t m = 1; m <= 8; ++m) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> w(m), mean(m), x(m);
      for (std::size_t k = 0; k < m; ++k) {
        w[k] = u(rng);
        mean[k] = u(rng);
        x[k] = u(rng);
      }
      const double bias = u(rng);
      const auto phi = linear_shapley(w, bias, mean, x);
      const auto oracle = coalition_shapley(w, bias, mean, x);
      for (std::size_t k = 0; k < m; ++k) EXPECT_NEAR(phi[k], oracle[k], 1e-10);
      const double total = std::accumulate(phi.begin(), phi.end(), 0.0);
      EXPECT_NEAR(total, linear_model(w, bias, x) - linear_model(w, bias, mean), 1e-10);
    }
  }
  const std::vector<double> two{1, 2}, three{1, 2, 3};
  EXPECT_EQ(error_of([&] { linear_shapley(two, 0, three, two); }), ErrorCode::kInvalidArgument);
}

TEST(AttributionCsv, RoundTripAndCoverage) {
  testing::Rng rng(13);
  const DatasetBundle b = testing::random_bundle(rng, {.trips = 50});
  std::ostringstream out;
  write_attributions(b.attributions, b.trips, out);
  std::istringstream in(out.str());
  const AttributionTable back = load_attributions(in, b.trips);
  EXPECT_TRUE(std::equal(back.values().begin(), back.values().end(), b.attributions.values().begin()));

  std::string text = out.str();
  text.erase(text.rfind('\n', text.size() - 2) + 1);  // drop the last row
  std::istringstream truncated(text);
  try {
    load_attributions(truncated, b.trips);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
    EXPECT_NE(std::string(e.what()).find(std::to_string(b.trips.trips().back().id)), std::string::npos)
        << e.what();
  }
}

}  // namespace
}  // namespace odflow
