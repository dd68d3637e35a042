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
#include "asynctrig/horizon_space.hpp"

#include <algorithm>
#include <limits>

#include "asynctrig/error.hpp"

namespace asynctrig {

Horizon::Horizon(std::vector<int> actions) : actions_(std::move(actions))
{
    if (actions_.empty())
        throw DomainError("Horizon: empty action sequence");
    for (int a : actions_)
        if (a < 0)
            throw DomainError("Horizon: negative action");
}

std::size_t Horizon::idle_count() const noexcept
{
    return static_cast<std::size_t>(std::count(actions_.begin(), actions_.end(), 0));
}

int Horizon::max_action() const noexcept
{
    return actions_.empty() ? 0 : *std::max_element(actions_.begin(), actions_.end());
}

std::string Horizon::to_string() const
{
    std::string out;
    out.reserve(actions_.size());
    for (int a : actions_) {
        if (a > 9)
            throw DomainError("Horizon::to_string: action " + std::to_string(a) + " has no single-digit form");
        out.push_back(static_cast<char>('0' + a));
    }
    return out;
}

Horizon Horizon::parse(std::string_view digits)
{
    std::vector<int> actions;
    actions.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9')
            throw DomainError("Horizon::parse: invalid character '" + std::string(1, c) + "'");
        actions.push_back(c - '0');
    }
    return Horizon(std::move(actions));
}

Horizon Horizon::concat(const Horizon& tail) const
{
    std::vector<int> joined = actions_;
    joined.insert(joined.end(), tail.actions_.begin(), tail.actions_.end());
    return Horizon(std::move(joined));
}

std::size_t horizon_count(int m, int l_min, int l_max)
{
    std::size_t total = 0;
    std::size_t pow = 1;
    for (int l = 1; l <= l_max; ++l) {
        pow *= static_cast<std::size_t>(m + 1);
        if (l >= l_min)
            total += pow;
    }
    return total;
}

std::vector<Horizon> enumerate_horizons(int m, int l_min, int l_max, std::size_t cap)
{
    if (m < 1)
        throw DomainError("enumerate_horizons: need at least one sensor");
    if (l_min < 1 || l_min > l_max)
        throw DomainError("enumerate_horizons: need 1 <= l_min <= l_max");

    const auto base = static_cast<std::size_t>(m + 1);
    std::size_t top = 1;
    for (int l = 0; l < l_max; ++l) {
        if (top > cap / base + 1)
            throw ResourceError("enumerate_horizons: (m+1)^l_max overflows the cap of " + std::to_string(cap));
        top *= base;
    }
    if (top > cap)
        throw ResourceError("enumerate_horizons: (m+1)^l_max = " + std::to_string(top) + " exceeds the cap of " +
                            std::to_string(cap));

    std::vector<Horizon> out;
    out.reserve(horizon_count(m, l_min, l_max));
    for (int l = l_min; l <= l_max; ++l) {
        std::vector<int> digits(static_cast<std::size_t>(l), 0);
        while (true) {
            out.emplace_back(digits);
            int pos = l - 1;
            while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == m) {
                digits[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0)
                break;
            ++digits[static_cast<std::size_t>(pos)];
        }
    }
    return out;
}

double avg_idle_metric(const Horizon& sigma, int m)
{
    if (m < 1)
        throw DomainError("avg_idle_metric: need at least one sensor");
    if (sigma.empty())
        throw DomainError("avg_idle_metric: empty horizon");
    const double len = static_cast<double>(sigma.size());
    return (static_cast<double>(sigma.idle_count()) + len) / (static_cast<double>(m) * len);
}

} // namespace asynctrig
