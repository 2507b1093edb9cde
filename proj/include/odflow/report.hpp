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

// JSON documents shared by the HTTP API and the batch CLI. Both front doors
// call these functions, so a report is the same no matter how it was asked for.

#ifndef ODFLOW_REPORT_HPP_
#define ODFLOW_REPORT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "odflow/bundle.hpp"
#include "odflow/error.hpp"
#include "odflow/explain.hpp"
#include "odflow/odplot.hpp"
#include "odflow/selection.hpp"

namespace odflow {

using Json = nlohmann::json;

// Body of POST /datasets/{id}/selection and of `odflow report` selection files:
//   {"shape": {"type": "rectangle", "x0", "x1", "y0", "y1"}
//            | {"type": "x_band" | "y_band", "min", "max"}
//            | {"type": "polygon", "vertices": [[x, y], ...]},
//    "class_filter": "all" | "0" | "1",
//    "detail_feature": "<name>",         (optional)
//    "group_by": "label" | "predicted",  (optional, default label)
//    "bins": <int >= 1>}                 (optional, default 20)
struct SelectionRequest {
  Selection selection;
  std::optional<std::string> detail_feature;
  GroupBy group_by = GroupBy::kLabel;
  std::size_t bins = kDefaultHistogramBins;
};

// Throws Error(kInvalidArgument) describing the first problem found.
SelectionRequest parse_selection_request(const Json& body);
Json to_json(const Selection& s);

// {trip_ids, count, class_filter, geometry, importance, evaluation,
//  feature_detail?}. For an empty selection the analytic sections are null.
Json selection_report(const DatasetBundle& b, const SelectionRequest& request);

Json importance_json(const ImportanceReport& r);
Json evaluation_json(const EvaluationReport& r);
Json feature_detail_json(const FeatureDetail& d);
Json geometry_json(std::span<const TripSegment> segments);

Json dataset_summary_json(const DatasetBundle& b);
Json ordering_json(const DatasetBundle& b);
Json points_json(const DatasetBundle& b, ClassFilter filter);
Json grid_json(const OdMatrix& m);
Json features_json(const DatasetBundle& b);

Json error_json(ErrorCode code, const std::string& message);

}  // namespace odflow

#endif  // ODFLOW_REPORT_HPP_
