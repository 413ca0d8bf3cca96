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

#ifndef STATOR_RANDOM_HPP
#define STATOR_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace stator {

/// Seedable, splittable generator. Uniform doubles are derived from raw
/// 64-bit draws so streams are identical across standard libraries.
class Rng {
   public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal (Box-Muller on uniform()).
    double normal();
    /// Independent child stream; advances this stream by one draw.
    Rng split();

   private:
    std::mt19937_64 engine_;
};

/// Source of measurement outcomes. Given the outcome probabilities of one
/// measurement, returns the index of the outcome that occurs.
class OutcomeSource {
   public:
    virtual ~OutcomeSource() = default;
    virtual std::size_t choose(std::span<const double> probabilities) = 0;
};

/// Samples outcomes with an Rng.
class SampledOutcomes final : public OutcomeSource {
   public:
    explicit SampledOutcomes(Rng rng) : rng_(rng) {
    }
    std::size_t choose(std::span<const double> probabilities) override;

   private:
    Rng rng_;
};

/// Replays a fixed outcome sequence. Throws ZeroProbabilityError when asked to
/// take an impossible outcome and ValidationError when the sequence runs out.
class ForcedOutcomes final : public OutcomeSource {
   public:
    explicit ForcedOutcomes(std::vector<std::size_t> choices) : choices_(std::move(choices)) {
    }
    std::size_t choose(std::span<const double> probabilities) override;
    std::size_t consumed() const {
        return cursor_;
    }

   private:
    std::vector<std::size_t> choices_;
    std::size_t cursor_ = 0;
};

}  // namespace stator

#endif
