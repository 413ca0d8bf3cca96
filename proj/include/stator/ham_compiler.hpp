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

#ifndef STATOR_HAM_COMPILER_HPP
#define STATOR_HAM_COMPILER_HPP

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "stator/cost_optimizer.hpp"
#include "stator/linalg.hpp"

namespace stator {

/// Largest local dimension the compiler accepts.
inline constexpr std::size_t kMaxLocalDimension = 4;

/// kPlusI compiles exp(+i t H); kMinusI compiles exp(-i t H).
enum class TimeConvention { kPlusI, kMinusI };

struct TensorProductTerm {
    std::vector<Eigen::MatrixXcd> factors;  // H_1 (x) ... (x) H_N
};

/// H = sum of tensor-product terms, evolved for `time` in `slices` Trotter steps.
struct HamiltonianSpec {
    std::vector<TensorProductTerm> terms;
    double time = 0.0;
    std::size_t slices = 1;
    TimeConvention convention = TimeConvention::kPlusI;

    Dims dims() const;
    /// Hermitian factors, matching dims across terms, d_j <= 4. Throws ValidationError naming the factor.
    void validate() const;
    OperatorMatrix total() const;
    /// +time or -time depending on the convention.
    double signed_time() const;
};

/// Per-party eigen-decomposition: H_j = norm_j Q_j diag(a_j) Q_j^dagger, a sorted descending.
struct DiagonalizedForm {
    std::vector<Eigen::MatrixXcd> locals;
    std::vector<std::vector<double>> diagonals;
    std::vector<double> factor_norms;
    double delta = 0.0;  // product of the factor norms

    Dims dims() const;
};

DiagonalizedForm diagonalize(const TensorProductTerm &term);
/// Requires a single-term spec.
DiagonalizedForm diagonalize(const HamiltonianSpec &spec);

/// Carrier qubit B_j attached to party j; A_jB_j is indexed 2*l + b.
struct AncillaPrep {
    std::size_t party;
    std::size_t dim;  // d_j of the system part
};

enum class LayerKind {
    kBasisChange,  // into or out of the eigenbasis, with the carrier relabeling
    kSwap,         // carrier flips on the levels whose switching time is reached
};

/// Unitary on A_jB_j.
struct LocalLayer {
    std::size_t party;
    Eigen::MatrixXcd op;
    LayerKind kind;
};

/// exp(i angle Z_{B_1} (x) ... (x) Z_{B_N}) on the carriers.
struct ZZRotation {
    double angle;
};

/// Keep only the carrier-|0> part of party j.
struct SubspaceRestrict {
    std::size_t party;
};

using Primitive = std::variant<AncillaPrep, LocalLayer, ZZRotation, SubspaceRestrict>;

struct CompiledSchedule {
    Dims system_dims;
    std::vector<Primitive> primitives;
    std::size_t terms = 1;
    std::size_t slices = 1;
    double total_angle = 0.0;     // sum of |angle| over rotations
    double linear_ebits = 0.0;    // kOptimizedEbitsPerRadian * total_angle
    bool no_interior_events = true;  // no swap layers anywhere
};

/// One step of duration dt for party j alone (other carriers read plain Z):
/// rotations between the switching times p_l dt, carrier flips at each time,
/// and the flips undone at dt. Angles are in units of dt * delta.
std::vector<Primitive> compile_factor_step(std::size_t party, const DiagonalizedForm &form, double dt);

/// Single tensor-product term.
CompiledSchedule compile(const HamiltonianSpec &spec);

/// First-order Trotter product over the terms, repeated spec.slices times.
CompiledSchedule compile_sum(const HamiltonianSpec &spec);

enum class CostMode { kLinear, kExact };

/// Linear: kOptimizedEbitsPerRadian * sum |angle|. Exact: optimized cost of every rotation (needs an optimizer).
double cost_estimate(const CompiledSchedule &schedule, CostMode mode, const EntanglementOptimizer *optimizer = nullptr);

struct ScheduleEvaluation {
    OperatorMatrix restricted;  // V^dagger W V on the system space
    double leakage = 0.0;       // Frobenius norm of the part of W V outside the embedded space
};

/// Dense product of the primitives applied to the embedded system space.
ScheduleEvaluation evaluate(const CompiledSchedule &schedule);

std::size_t swap_layer_count(const CompiledSchedule &schedule);
std::size_t rotation_count(const CompiledSchedule &schedule);

struct CompileVerification {
    double operator_distance = 0.0;  // against expm_oracle of the full sum
    double leakage = 0.0;
};

CompileVerification verify_schedule(const CompiledSchedule &schedule, const HamiltonianSpec &spec);

std::string primitive_name(const Primitive &p);

}  // namespace stator

#endif
