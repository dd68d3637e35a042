/*
 Copyright 2026 The asynctrig Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <filesystem>
#include <ostream>

#include "asynctrig/config.hpp"
#include "asynctrig/report.hpp"

namespace asynctrig {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitConfig = 2, kExitInfeasible = 3, kExitResource = 4 };

struct RunOutcome {
    Synthesis synthesis;
    SimTrace trace;
    RunManifest manifest;
};

/// Synthesize, simulate and write trace/decision CSVs (plus SVGs when plots is set) under the config's output dir.
RunOutcome run_pipeline(const RunConfig& config, bool plots);

/// Maps the exception in flight to an exit code and prints it to err.
int exit_code_for_current_exception(std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace asynctrig
