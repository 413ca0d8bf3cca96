// Copyright 2026 The Stator Authors
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

#include "stator/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stator/error.hpp"
#include "stator/linalg.hpp"

using namespace stator;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {
}

std::uint64_t Rng::next_u64() {
    return engine_();
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split() {
    return Rng(splitmix64(next_u64()));
}

std::size_t SampledOutcomes::choose(std::span<const double> probabilities) {
    if (probabilities.empty()) {
        throw ValidationError("no outcomes to choose from");
    }
    double total = 0.0;
    for (double p : probabilities) {
        total += p;
    }
    double u = rng_.uniform() * total;
    double acc = 0.0;
    std::size_t last_possible = 0;
    for (std::size_t k = 0; k < probabilities.size(); k++) {
        if (probabilities[k] > 0.0) {
            last_possible = k;
        }
        acc += probabilities[k];
        if (u < acc && probabilities[k] > 0.0) {
            return k;
        }
    }
    return last_possible;
}

std::size_t ForcedOutcomes::choose(std::span<const double> probabilities) {
    if (cursor_ >= choices_.size()) {
        throw ValidationError("forced outcome sequence exhausted");
    }
    std::size_t k = choices_[cursor_++];
    if (k >= probabilities.size()) {
        throw ValidationError("forced outcome " + std::to_string(k) + " out of range");
    }
    if (!(probabilities[k] > kZeroProbability)) {
        throw ZeroProbabilityError("forced outcome " + std::to_string(k) + " has zero probability");
    }
    return k;
}
