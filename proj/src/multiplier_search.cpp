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
#include "asynctrig/multiplier_search.hpp"

#include <algorithm>
#include <cmath>

namespace asynctrig {

std::optional<MultiplierResult> search_multiplier(const std::function<double(double)>& score,
                                                  const MultiplierSearchOptions& options)
{
    const double log_lo = std::log(options.lo);
    const double log_hi = std::log(options.hi);
    const int n = std::max(options.grid_points, 2);
    const double step = (log_hi - log_lo) / (n - 1);

    int best_i = 0;
    double best = -HUGE_VAL;
    for (int i = 0; i < n; ++i) {
        const double eps = std::exp(log_lo + i * step);
        const double s = score(eps);
        if (s >= options.accept)
            return MultiplierResult{eps, s};
        if (s > best) {
            best = s;
            best_i = i;
        }
    }

    double a = log_lo + std::max(best_i - 1, 0) * step;
    double b = log_lo + std::min(best_i + 1, n - 1) * step;
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = score(std::exp(c));
    double fd = score(std::exp(d));
    MultiplierResult result{std::exp(log_lo + best_i * step), best};
    for (int it = 0; it < options.golden_iterations; ++it) {
        if (fc > result.score)
            result = {std::exp(c), fc};
        if (fd > result.score)
            result = {std::exp(d), fd};
        if (result.score >= options.accept)
            return result;
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(std::exp(d));
        }
    }
    if (result.score >= options.accept)
        return result;
    return std::nullopt;
}

} // namespace asynctrig
