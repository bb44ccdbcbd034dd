// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NMRQC_CLI_HPP
#define NMRQC_CLI_HPP

namespace nmrqc::cli {

/// Entry point behind main(). Subcommands: run, compile, pulse-report.
/// Exit codes: 0 success, 1 failed equivalence check or wrong verdict,
/// 2 malformed input (CLI, config, sequence, matrix file), 3 degraded or
/// unclassifiable readout.
int run(int argc, const char* const* argv);

}  // namespace nmrqc::cli

#endif
