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

#ifndef ODFLOW_SERVICE_HPP_
#define ODFLOW_SERVICE_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "odflow/bundle.hpp"

namespace odflow {

struct ApiRequest {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // always JSON
};

// Stateless JSON API over a fixed set of bundles:
//   GET  /datasets
//   GET  /datasets/{id}/ordering
//   GET  /datasets/{id}/points?class=all|0|1
//   GET  /datasets/{id}/density?bins=B&class=...   (bins defaults to n)
//   GET  /datasets/{id}/matrix?resolution=R&class=...
//   GET  /datasets/{id}/features
//   POST /datasets/{id}/selection
// Errors are {code, message} with 400 for bad input and 404 for unknown
// datasets, features, trips or routes. handle() never mutates the bundles
// and is safe to call from many threads.
class Api {
 public:
  explicit Api(std::vector<DatasetBundle> bundles);

  ApiResponse handle(const ApiRequest& request) const;

  const DatasetBundle* find(const std::string& id) const;
  const std::vector<DatasetBundle>& bundles() const { return bundles_; }

 private:
  std::vector<DatasetBundle> bundles_;
};

// cpp-httplib front end for an Api.
class HttpServer {
 public:
  explicit HttpServer(const Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds without serving; port 0 picks a free port. Returns the bound port
  // or throws Error(kIo).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace odflow

#endif  // ODFLOW_SERVICE_HPP_
