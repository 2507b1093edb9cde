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

#ifndef ODFLOW_CLI_HPP_
#define ODFLOW_CLI_HPP_

namespace odflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation or solver error
inline constexpr int kExitUsage = 2;

// Entry point of the `odflow` tool. Subcommands: order, plot, matrix,
// report, synth, validate, serve. Diagnostics go to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace odflow

#endif  // ODFLOW_CLI_HPP_
