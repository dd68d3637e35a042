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

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace asynctrig {

/// A finite sequence of per-period actions: 0 is the idle step, 1..m samples
/// the sensor with that index.
class Horizon {
public:
    Horizon() = default;
    explicit Horizon(std::vector<int> actions);

    const std::vector<int>& actions() const noexcept { return actions_; }
    std::size_t size() const noexcept { return actions_.size(); }
    bool empty() const noexcept { return actions_.empty(); }
    int operator[](std::size_t i) const { return actions_[i]; }

    std::size_t idle_count() const noexcept;
    int max_action() const noexcept;

    /// Digit string, e.g. "0012222". Requires every action <= 9.
    std::string to_string() const;
    static Horizon parse(std::string_view digits);

    Horizon concat(const Horizon& tail) const;

    auto operator<=>(const Horizon&) const = default;

private:
    std::vector<int> actions_;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/**
 * All horizons over {0..m} with length in [l_min, l_max], shortest lengths
 * first and lexicographic within a length.
 *
 * Throws ResourceError when (m+1)^l_max exceeds cap.
 */
std::vector<Horizon> enumerate_horizons(int m, int l_min, int l_max, std::size_t cap = kDefaultEnumerationCap);

/// Closed-form size of enumerate_horizons(m, l_min, l_max).
std::size_t horizon_count(int m, int l_min, int l_max);

/// (zeros + |sigma|) / (m |sigma|): the fraction of sensor slots left idle.
double avg_idle_metric(const Horizon& sigma, int m);

} // namespace asynctrig
