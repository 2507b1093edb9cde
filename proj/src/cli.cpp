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

#include "odflow/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "odflow/bundle.hpp"
#include "odflow/csv.hpp"
#include "odflow/error.hpp"
#include "odflow/report.hpp"
#include "odflow/service.hpp"
#include "odflow/synth.hpp"

namespace odflow {

namespace {

namespace fs = std::filesystem;

// Raised for bad flag values that CLI11 cannot catch on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes through `fn` to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  fn(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

ClassFilter class_option(const std::string& text) {
  const auto f = parse_class_filter(text);
  if (!f) throw UsageError("--class must be one of all, 0, 1");
  return *f;
}

SolverOptions solver_option(const std::string& text) {
  SolverOptions o;
  if (text == "auto") {
    o.kind = SolverKind::kAuto;
  } else if (text == "dense") {
    o.kind = SolverKind::kDense;
  } else if (text == "lanczos") {
    o.kind = SolverKind::kLanczos;
  } else {
    throw UsageError("--solver must be one of auto, dense, lanczos");
  }
  return o;
}

std::array<double, 4> mix_option(const std::string& text) {
  std::array<double, 4> mix{};
  std::stringstream in(text);
  std::string item;
  std::size_t k = 0;
  while (std::getline(in, item, ',')) {
    const auto v = csv::parse_double(item);
    if (k >= 4 || !v) {
      throw UsageError("--mix takes four comma-separated weights "
                       "(diagonal,vertical,horizontal,cluster)");
    }
    mix[k++] = *v;
  }
  if (k != 4) {
    throw UsageError("--mix takes four comma-separated weights "
                     "(diagonal,vertical,horizontal,cluster)");
  }
  return mix;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Spectral OD-plot engine: ordering, plots, reports and service"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "odflow 1.0.0");

  std::string nodes_path, edges_path, out_path, solver = "auto";
  auto* order = app.add_subcommand("order", "Compute the spectral node ordering");
  order->add_option("--nodes", nodes_path, "nodes CSV (node_id,x,y)")->required();
  order->add_option("--edges", edges_path, "edges CSV (src,dst,length)")->required();
  order->add_option("--out", out_path, "ordering CSV, stdout when omitted");
  order->add_option("--solver", solver, "auto, dense or lanczos");

  std::string bundle_dir, class_text = "all";
  auto* plot = app.add_subcommand("plot", "Export OD-plot points");
  plot->add_option("--bundle", bundle_dir, "bundle directory")->required();
  plot->add_option("--out", out_path, "points CSV, stdout when omitted");
  plot->add_option("--class", class_text, "all, 0 or 1");

  std::size_t resolution = 0;
  auto* matrix = app.add_subcommand("matrix", "Export an R x R OD matrix");
  matrix->add_option("--bundle", bundle_dir, "bundle directory")->required();
  matrix->add_option("--resolution", resolution, "bins per axis")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  matrix->add_option("--class", class_text, "all, 0 or 1");
  matrix->add_option("--out", out_path, "matrix CSV, stdout when omitted");

  std::string selection_path;
  auto* report = app.add_subcommand("report", "Analyse one selection");
  report->add_option("--bundle", bundle_dir, "bundle directory")->required();
  report->add_option("--selection", selection_path,
                     "JSON file in the POST /selection body format")
      ->required();
  report->add_option("--out", out_path, "report JSON, stdout when omitted");

  std::string graph_text = "random-planar:302", mix_text;
  SyntheticSpec spec;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic bundle");
  synth->add_option("--graph", graph_text,
                    "path:N, grid:WxH or random-planar:N");
  synth->add_option("--trips", spec.trips, "number of trips");
  synth->add_option("--mix", mix_text,
                    "weights diagonal,vertical,horizontal,cluster");
  synth->add_option("--imbalance", spec.class1_fraction,
                    "fraction of trips labelled 1");
  synth->add_option("--seed", spec.seed, "RNG seed");
  synth->add_option("--out", out_path, "output bundle directory")->required();

  auto* check = app.add_subcommand("validate", "Load and cross-check a bundle");
  check->add_option("--bundle", bundle_dir, "bundle directory")->required();

  std::string data_dir, host = "127.0.0.1";
  int port = 0;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "TCP port (env ODFLOW_PORT)");
  serve->add_option("--data-dir", data_dir,
                    "directory of bundles (env ODFLOW_DATA_DIR)");
  serve->add_option("--host", host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*order) {
      const SolverOptions opts = solver_option(solver);
      const SpatialGraph g = load_graph(fs::path(nodes_path), fs::path(edges_path));
      const FiedlerOrdering o = order_nodes(g, build_laplacian(g), opts);
      emit(out_path, [&](std::ostream& out) { write_ordering(o, out); });
    } else if (*plot) {
      const ClassFilter filter = class_option(class_text);
      const DatasetBundle b = load_bundle(bundle_dir);
      emit(out_path, [&](std::ostream& out) {
        write_plot(b.points, b.trips, out, filter);
      });
    } else if (*matrix) {
      const ClassFilter filter = class_option(class_text);
      const DatasetBundle b = load_bundle(bundle_dir);
      const OdMatrix m =
          od_matrix(b.points, b.trips, b.ordering.size(), resolution, filter);
      emit(out_path, [&](std::ostream& out) { write_matrix(m, out); });
    } else if (*report) {
      const DatasetBundle b = load_bundle(bundle_dir);
      std::ifstream in(selection_path, std::ios::binary);
      if (!in) throw Error(ErrorCode::kIo, "cannot read " + selection_path);
      Json body;
      try {
        body = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::kParse, selection_path + ": " + e.what());
      }
      const Json doc = selection_report(b, parse_selection_request(body));
      emit(out_path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
    } else if (*synth) {
      try {
        parse_graph_kind(graph_text, spec);
        if (!mix_text.empty()) spec.mix = mix_option(mix_text);
        validate(spec);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      const DatasetBundle b = synthesize(spec);
      write_bundle(b, out_path, true);
    } else if (*check) {
      const DatasetBundle b = load_bundle(bundle_dir);
      std::cout << dataset_summary_json(b).dump() << '\n';
    } else if (*serve) {
      if (serve->count("--port") == 0) {
        const std::string env = env_or("ODFLOW_PORT", "8080");
        const auto p = csv::parse_int(env);
        if (!p || *p < 0 || *p > 65535) throw UsageError("bad ODFLOW_PORT " + env);
        port = static_cast<int>(*p);
      }
      if (data_dir.empty()) data_dir = env_or("ODFLOW_DATA_DIR", "data");
      const Api api(load_bundles(data_dir));
      HttpServer server(api);
      const int bound = server.bind(host, port);
      std::cerr << "odflow: serving " << api.bundles().size() << " dataset(s) on http://"
                << host << ':' << bound << '\n';
      server.serve();
    }
  } catch (const UsageError& e) {
    std::cerr << "odflow: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "odflow: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "odflow: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace odflow
