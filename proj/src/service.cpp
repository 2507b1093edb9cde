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

#include "odflow/service.hpp"

#include <httplib.h>

#include <exception>
#include <optional>
#include <string_view>

#include "odflow/csv.hpp"
#include "odflow/error.hpp"
#include "odflow/report.hpp"

namespace odflow {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLookup: return 404;
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kEmptySelection: return 400;
    default: return 500;
  }
}

ApiResponse json_response(int status, const Json& body) {
  return ApiResponse{status, body.dump()};
}

ApiResponse error_response(ErrorCode code, const std::string& message) {
  return json_response(status_for(code), error_json(code, message));
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    const auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

ClassFilter class_param(const ApiRequest& req) {
  const auto it = req.query.find("class");
  if (it == req.query.end()) return ClassFilter::kAll;
  const auto parsed = parse_class_filter(it->second);
  if (!parsed) {
    throw Error(ErrorCode::kInvalidArgument,
                "class must be one of all, 0, 1");
  }
  return *parsed;
}

std::optional<std::size_t> positive_param(const ApiRequest& req,
                                          const std::string& name) {
  const auto it = req.query.find(name);
  if (it == req.query.end()) return std::nullopt;
  const auto v = csv::parse_int(it->second);
  if (!v || *v < 1 || *v > 100000) {
    throw Error(ErrorCode::kInvalidArgument,
                name + " must be an integer in [1, 100000]");
  }
  return static_cast<std::size_t>(*v);
}

}  // namespace

Api::Api(std::vector<DatasetBundle> bundles) : bundles_(std::move(bundles)) {}

const DatasetBundle* Api::find(const std::string& id) const {
  for (const auto& b : bundles_) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

ApiResponse Api::handle(const ApiRequest& req) const {
  try {
    const auto parts = split_path(req.path);
    if (parts.empty() || parts[0] != "datasets" || parts.size() > 3) {
      return error_response(ErrorCode::kLookup, "no route for " + req.path);
    }
    if (parts.size() == 1) {
      if (req.method != "GET") {
        return error_response(ErrorCode::kInvalidArgument, "use GET");
      }
      Json list = Json::array();
      for (const auto& b : bundles_) list.push_back(dataset_summary_json(b));
      return json_response(200, list);
    }

    const DatasetBundle* b = find(std::string(parts[1]));
    if (b == nullptr) {
      return error_response(ErrorCode::kLookup,
                            "unknown dataset '" + std::string(parts[1]) + "'");
    }
    if (parts.size() == 2) {
      return json_response(200, dataset_summary_json(*b));
    }

    const std::string_view view = parts[2];
    if (view == "selection") {
      if (req.method != "POST") {
        return error_response(ErrorCode::kInvalidArgument,
                              "selection requires POST");
      }
      Json body;
      try {
        body = Json::parse(req.body);
      } catch (const Json::parse_error& e) {
        return error_response(ErrorCode::kInvalidArgument,
                              std::string("malformed JSON body: ") + e.what());
      }
      return json_response(200,
                           selection_report(*b, parse_selection_request(body)));
    }
    if (req.method != "GET") {
      return error_response(ErrorCode::kInvalidArgument, "use GET");
    }
    if (view == "ordering") return json_response(200, ordering_json(*b));
    if (view == "features") return json_response(200, features_json(*b));
    if (view == "points") {
      return json_response(200, points_json(*b, class_param(req)));
    }
    if (view == "density") {
      const std::size_t bins =
          positive_param(req, "bins").value_or(b->ordering.size());
      return json_response(
          200, grid_json(density_grid(b->points, b->ordering.size(), bins,
                                      b->trips.labels(), class_param(req))));
    }
    if (view == "matrix") {
      const auto resolution = positive_param(req, "resolution");
      if (!resolution) {
        return error_response(ErrorCode::kInvalidArgument,
                              "matrix requires ?resolution=R");
      }
      return json_response(
          200, grid_json(od_matrix(b->points, b->trips, b->ordering.size(),
                                   *resolution, class_param(req))));
    }
    return error_response(ErrorCode::kLookup, "no route for " + req.path);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    return json_response(500, error_json(ErrorCode::kIo, e.what()));
  }
}

struct HttpServer::Impl {
  const Api& api;
  httplib::Server server;
};

HttpServer::HttpServer(const Api& api) : impl_(new Impl{api, {}}) {
  // httplib defaults to SO_REUSEPORT, which lets a second server share a
  // busy port silently. Plain SO_REUSEADDR makes the clash a bind error.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    const ApiResponse out = impl_->api.handle(request);
    res.status = out.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body, "application/json");
  };
  impl_->server.Get(".*", forward);
  impl_->server.Post(".*", forward);
  impl_->server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) {
    throw Error(ErrorCode::kIo,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace odflow
