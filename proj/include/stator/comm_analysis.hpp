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

#ifndef STATOR_COMM_ANALYSIS_HPP
#define STATOR_COMM_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stator/cost_optimizer.hpp"

namespace stator {

inline constexpr double kDefaultDelta = 0.05;
inline constexpr double kDefaultEpsilon = 1e-3;
inline constexpr std::size_t kMaxBlockLength = 22;

/// Weakly typical set of M i.i.d. bits with P(1) = p:
/// sequences with |-(1/M) log2 Pr(seq) - h(p)| <= delta.
struct TypicalSetReport {
    std::size_t block_length = 0;
    double p = 0.0;
    double delta = 0.0;
    std::uint64_t set_size = 0;
    double mass = 0.0;
};

TypicalSetReport typical_set(std::size_t block_length, double p, double delta);

/// True when a sequence of the given Hamming weight is in the typical set.
bool weight_is_typical(std::size_t block_length, std::size_t weight, double p, double delta);

/// Smallest M0 <= max_block such that the mass is >= 1 - epsilon for every M in [M0, max_block].
std::optional<std::size_t> typical_threshold(
    double p, double delta, double epsilon, std::size_t max_block = kMaxBlockLength);

struct HighProbabilitySet {
    std::uint64_t size = 0;
    double mass = 0.0;
};

/// Fewest sequences whose total probability reaches 1 - epsilon (greedy by probability).
HighProbabilitySet smallest_high_probability_set(std::size_t block_length, double p, double epsilon);

/// |<Psi~|Psi>|^2 for the M-fold resource state truncated to its typical set and renormalized.
double compressed_state_fidelity(std::size_t block_length, double beta, double delta);

/// Product of per-stage fidelities.
double chained_fidelity(std::span<const double> fidelities);

struct WorkerRate {
    double compressed = 0.0;  // sum over probabilistic stages of p(l) E(beta_l) (1+delta)^2
    double terminal = 0.0;    // the terminal stage's single uncompressed bit, times its reach
    double total = 0.0;
};

WorkerRate worker_comm_rate(const CostProfile &profile, double delta);

enum class LeaderMode { kUncompressed, kEntropyBound };

/// Bits per use from party N.
double leader_comm_rate(const CostProfile &profile, LeaderMode mode);

struct CommProfile {
    double alpha = 0.0;
    double worker_bits_rate = 0.0;
    double leader_bits_rate = 0.0;
    double delta = kDefaultDelta;
    double epsilon = kDefaultEpsilon;
};

CommProfile comm_profile(const CostProfile &profile, double delta = kDefaultDelta, double epsilon = kDefaultEpsilon);

/// One probabilistic stage chosen for the most likely success, then the
/// deterministic stage on failure.
struct LeaderCommOptimum {
    double beta = 0.0;
    double success_probability = 0.0;
    double failure_probability = 0.0;
    double ebits = 0.0;
    CommProfile profile;
    StageSchedule schedule;
};

LeaderCommOptimum optimize_leader_comm(
    double alpha, double delta = kDefaultDelta, double epsilon = kDefaultEpsilon);

struct LeaderRatioRow {
    double alpha;
    double leader_rate;
    double ratio;  // leader_rate / alpha
};

struct LeaderRatioCurve {
    std::vector<LeaderRatioRow> rows;
    double slope = 0.0;  // of ratio against log2(1/alpha)
    double intercept = 0.0;
    double r_squared = 0.0;
};

LeaderRatioCurve leader_ratio_curve(std::span<const double> alphas);

/// Workers measure their share of sum_i mu_i |i>^{(x)N} (i over the typical
/// set) in the Fourier basis, the leader undoes the summed phase; the
/// leader's register must then carry mu_i again. Checks every outcome pattern
/// (up to max_patterns of them) and reports the worst coefficient deviation.
struct FourierCheck {
    std::size_t set_size = 0;
    std::size_t patterns_checked = 0;
    double max_deviation = 0.0;
};

FourierCheck fourier_parity_check(
    std::size_t block_length, double beta, double delta, std::size_t parties, std::size_t max_patterns = 4096);

}  // namespace stator

#endif
