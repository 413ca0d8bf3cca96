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

#ifndef STATOR_STAGE_PROTOCOL_HPP
#define STATOR_STAGE_PROTOCOL_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stator/linalg.hpp"
#include "stator/random.hpp"

namespace stator {

/// Representative of x modulo pi in (-pi/2, pi/2]. U(x + pi) = -U(x), so this
/// loses nothing but a global phase.
double fold_angle(double x);

/// Cost-equivalent representative in [0, pi/4]: |fold(x)|, reflected about pi/4.
/// U(pi/2 - x) differs from U(-x) by the local layer U(pi/2), and U(-x) is U(x)
/// with the leader's basis mirrored, so all three cost the same.
double reduce_angle(double x);

/// True when U(a) and U(b) agree up to global phase (a = b mod pi) within tol.
bool angles_equivalent(double a, double b, double tol = 1e-12);

enum class StageKind {
    kProbabilistic,  // four-step stage with resource angle beta
    kDeterministic,  // beta = pi/4, both branches correctable; always terminal
    kLocal,          // the local layer U(pi/2); no resource, no communication
};

struct StageParams {
    double alpha = 0.0;  // rotation this stage attempts
    double beta = 0.0;   // resource parameter
    double gamma = 0.0;  // leader projection parameter
    std::size_t stage_index = 1;
    StageKind kind = StageKind::kProbabilistic;
};

/// gamma with tan(beta) tan(gamma) = tan(alpha), principal branch.
double gamma_for(double alpha, double beta);

StageParams probabilistic_stage(double alpha, double beta, std::size_t stage_index);
StageParams deterministic_stage(double alpha, std::size_t stage_index);
StageParams local_stage(std::size_t stage_index);

/// Probability that the leader's projection lands on the success vector,
/// cos^2(beta)cos^2(gamma) + sin^2(beta)sin^2(gamma). Independent of the input.
double success_probability(const StageParams &params);

struct FailureResidual {
    double alpha_prime;  // the failure branch applies U(alpha_prime)
    double alpha_next;   // what remains to be done: fold(alpha - alpha_prime)
};

FailureResidual failure_residual(const StageParams &params);

/// Angle applied by the success branch; equals alpha mod pi when the stage is consistent.
double success_rotation(const StageParams &params);

/// Throws ValidationError unless tan(beta) tan(gamma) = tan(alpha).
void check_stage_relation(const StageParams &params);

struct StageSchedule {
    double alpha = 0.0;
    std::vector<StageParams> stages;
    std::size_t max_stages = 25;

    bool empty() const {
        return stages.empty();
    }
    const StageParams &terminal() const;

    /// Chaining, stage relation, numbering and terminal marker. Throws ValidationError.
    void validate() const;
};

/// One deterministic stage (or nothing / a local layer for alpha = 0 / pi/2).
StageSchedule deterministic_schedule(double alpha);

/// beta_l = |alpha_l| at every stage: success probability 1/2, doubling on failure,
/// deterministic stage once |alpha_l| reaches pi/4 or at stage max_stages.
StageSchedule cdkl_schedule(double alpha, std::size_t max_stages = 25);

/// Probabilistic stages with the given betas, then a deterministic terminal stage.
StageSchedule schedule_from_betas(double alpha, std::span<const double> betas, std::size_t max_stages = 25);

enum class Branch { kSuccess = 0, kFailure = 1 };

struct StageOutcome {
    StageKind kind = StageKind::kProbabilistic;
    Branch branch = Branch::kSuccess;
    std::vector<int> worker_bits;  // raw step-two results of parties 1..N-1
    double probability = 1.0;      // probability of this outcome pattern
};

struct StageResult {
    StateVector state;
    StageOutcome outcome;
};

/// Executes steps 1-4 on a system of one qubit per party.
StageResult run_stage(const StateVector &system, const StageParams &params, OutcomeSource &outcomes);

/// The beta = pi/4 stage with gamma = alpha; the failure branch is followed by a sigma_z layer.
StageResult run_deterministic_stage(const StateVector &system, double alpha, OutcomeSource &outcomes);

/// Joint state of (R_N, system) after steps 1-3 with the given worker results.
StateVector stage_after_correction(const StateVector &system, double beta, std::span<const int> worker_bits);

/// Operator a stage applies on one outcome pattern, scaled to be unitary.
/// Built by simulating the stage on every computational basis input.
OperatorMatrix stage_branch_operator(
    std::size_t parties, const StageParams &params, std::span<const int> worker_bits, Branch branch);

struct Transcript {
    std::vector<StageOutcome> outcomes;
    double ebits_consumed = 0.0;
    std::vector<std::size_t> bits_from_workers;  // parties 1..N-1
    std::size_t bits_from_leader = 0;
    OperatorMatrix net_operator;
    StateVector final_state;
    double probability = 1.0;  // product of the outcome probabilities along the path
};

/// Runs stages until one succeeds or the terminal stage finishes.
Transcript run_protocol(double alpha, const StageSchedule &schedule, const StateVector &system, OutcomeSource &outcomes);

struct ProtocolLeaf {
    std::vector<StageOutcome> path;
    double probability = 0.0;
    double ebits = 0.0;
    const OperatorMatrix *net_operator = nullptr;  // valid during the visitor call
    double distance = 0.0;                         // to U(alpha), phase-invariant
};

struct LeafSummary {
    std::size_t leaves = 0;
    double max_distance = 0.0;
    double total_probability = 0.0;
    double expected_ebits = 0.0;
    double expected_leader_bits = 0.0;
};

/// Every path of the branch tree (all worker patterns, both branches per stage).
/// Stage operators are built once per outcome pattern and composed along paths.
LeafSummary enumerate_protocol_leaves(
    const StageSchedule &schedule, std::size_t parties, const std::function<void(const ProtocolLeaf &)> &visit = {});

}  // namespace stator

#endif
