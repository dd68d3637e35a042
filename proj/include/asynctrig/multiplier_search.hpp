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

#include <functional>
#include <optional>

namespace asynctrig {

struct MultiplierSearchOptions {
    double lo = 1e-8;
    double hi = 1e8;
    int grid_points = 161;
    int golden_iterations = 60;
    double accept = -1e-9;  ///< feasible when score(eps) >= accept
};

struct MultiplierResult {
    double epsilon;
    double score;
};

/**
 * Maximizes score(eps) over eps in [lo, hi]: a log-spaced grid with early
 * exit on the first accepted point, then golden-section refinement in
 * log(eps) around the best grid point. Returns the multiplier only if the
 * final score is accepted.
 */
std::optional<MultiplierResult> search_multiplier(const std::function<double(double)>& score,
                                                  const MultiplierSearchOptions& options = {});

} // namespace asynctrig
