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

#ifndef STATOR_GENERAL_UNITARY_HPP
#define STATOR_GENERAL_UNITARY_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stator/linalg.hpp"
#include "stator/random.hpp"

namespace stator {

/// Largest number of terms (resource dimension) the simulator accepts.
inline constexpr std::size_t kMaxResourceDimension = 8;

/// U = sum_k lambda_k V_k^(1) (x) ... (x) V_k^(N).
struct TensorDecomposition {
    std::vector<Complex> lambdas;
    std::vector<std::vector<Eigen::MatrixXcd>> unitaries;  // [k][party]

    std::size_t parties() const;
    std::size_t resource_dim() const {
        return lambdas.size();
    }
    Dims system_dims() const;
    OperatorMatrix assemble() const;
    /// Unitary parts, matching dims, term 0 the identity, and a unitary sum (1e-9).
    void validate() const;
};

/// exp(i (tx XX + ty YY + tz ZZ)) as sum_k lambda_k sigma_k (x) sigma_k, k = I, X, Y, Z.
TensorDecomposition canonical_two_qubit(double theta_x, double theta_y, double theta_z);

/// exp(i a Z^{(x)N}) = cos a I + i sin a Z^{(x)N}.
TensorDecomposition collective_z_family(double a, std::size_t parties);

/// Three qubits: exp(i a ZZZ) exp(i b ZZI), four terms.
TensorDecomposition qubit_zzz_zzi_family(double a, double b);

/// Qutrits: exp(i a (C^{(x)N} + C^dagger{(x)N})) with C = diag(1, w, w^2); three terms C^k (x) ... (x) C^k.
TensorDecomposition qutrit_clock_family(double a, std::size_t parties);

/// Resource sum_k mu_k |k>^{(x)N}; the leader's success outcome projects on nu.
struct ResourceDesign {
    Eigen::VectorXcd mu;
    Eigen::VectorXcd nu;
};

enum class DesignPolicy { kSqrt, kCustom };

/// kSqrt: |mu_k| = |nu_k| = sqrt|lambda_k| with mu_k conj(nu_k) = lambda_k / sum|lambda|.
/// kCustom: takes `custom_mu` and solves nu_k = conj(lambda_k / mu_k), normalized.
ResourceDesign design_resource(
    const TensorDecomposition &decomp, DesignPolicy policy, std::optional<Eigen::VectorXcd> custom_mu = std::nullopt);

/// Throws ValidationError unless mu, nu are unit vectors with mu_k conj(nu_k) proportional to lambda_k (1e-10).
void check_design(const TensorDecomposition &decomp, const ResourceDesign &design);

/// Leader measurement basis: nu first, then Gram-Schmidt over e_0, e_1, ... Columns are basis vectors.
Eigen::MatrixXcd leader_basis(const Eigen::VectorXcd &nu);

/// Worker measurement vector for outcome s: components w^{-s k} / sqrt(d).
Eigen::VectorXcd fourier_vector(std::size_t d, std::size_t s);

struct GeneralRun {
    StateVector state;                        // normalized system state after the run
    std::vector<std::size_t> worker_outcomes;
    std::size_t leader_outcome = 0;           // 0 = success
    bool success = false;
    double probability = 0.0;                 // of this outcome path
};

/// Full state-vector run: controlled-V per party, Fourier measurements by the
/// workers, leader phase correction diag(w^{-k s}) with s the outcome sum mod
/// d, then the leader's measurement in leader_basis(nu).
GeneralRun run_general_protocol(
    const TensorDecomposition &decomp, const ResourceDesign &design, const StateVector &system,
    OutcomeSource &outcomes);

/// Unnormalized Kraus operator of one outcome path, built by simulating basis inputs.
OperatorMatrix general_branch_operator(
    const TensorDecomposition &decomp, const ResourceDesign &design, std::span<const std::size_t> worker_outcomes,
    std::size_t leader_outcome);

/// sum_k mu_k conj(b_k) V_k for leader basis vector b (worker factors dropped).
OperatorMatrix analytic_branch_operator(
    const TensorDecomposition &decomp, const ResourceDesign &design, std::size_t leader_outcome);

/// Success probability averaged over a maximally mixed input.
double average_success_probability(const TensorDecomposition &decomp, const ResourceDesign &design);

/// Entanglement of the resource: Shannon entropy of |mu_k|^2.
double design_entanglement(const ResourceDesign &design);

enum class FailurePolicy { kIterate, kTeleport };

struct FailureRound {
    double success_probability;
    double ebits;
};

struct FailureCostReport {
    FailurePolicy policy;
    double success_probability = 1.0;   // first round
    double failure_probability = 0.0;
    double first_round_ebits = 0.0;
    double fallback_ebits = 0.0;        // expected over later rounds / teleportation
    double fallback_bits = 0.0;
    double expected_ebits = 0.0;
    std::vector<FailureRound> rounds;   // iterate policy: every round taken
    std::optional<TensorDecomposition> next;  // iterate policy: target after the first failure
};

/// Iterate: two nonzero terms only, needs V_1^2 = I; retries on the corrected residual
/// (up to max_rounds, then teleports). Teleport: 2 sum_{j<N} log2 d_j ebits, twice that in bits.
FailureCostReport failure_policy_cost(
    const TensorDecomposition &decomp, const ResourceDesign &design, FailurePolicy policy,
    std::size_t max_rounds = 25);

/// Target after a failed round: U K^dagger for the failure residual K, as a two-term decomposition.
TensorDecomposition iterate_residual(const TensorDecomposition &decomp, const ResourceDesign &design);

struct FailureRow {
    double s;
    double failure_probability;
};

/// Analytic failure probability along a family under the sqrt policy.
std::vector<FailureRow> failure_vanishing_check(
    const std::function<TensorDecomposition(double)> &family, std::span<const double> s_values);

/// Every worker outcome pattern with the leader's success outcome; worst distance to U.
struct PatternCheck {
    std::size_t patterns = 0;
    double max_distance = 0.0;
    double success_probability = 0.0;  // summed over patterns, maximally mixed input
};

PatternCheck check_all_patterns(const TensorDecomposition &decomp, const ResourceDesign &design);

}  // namespace stator

#endif
