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

#ifndef STATOR_LINALG_HPP
#define STATOR_LINALG_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stator {

using Complex = std::complex<double>;
using Dims = std::vector<std::size_t>;

/// Largest joint dimension any dense object may have.
inline constexpr std::size_t kMaxJointDimension = std::size_t{1} << 22;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kOperatorTolerance = 1e-10;

/// Product of dims, throwing DimensionError once it passes kMaxJointDimension.
std::size_t joint_dimension(const Dims &dims);

/// Normalized pure state over a tensor-product space. Party 1 is the most
/// significant digit of the joint index.
class StateVector {
   public:
    StateVector(Dims dims, Eigen::VectorXcd amps);

    static StateVector basis(Dims dims, std::size_t index);
    /// Normalizes `amps` first; throws ZeroProbabilityError for the zero vector.
    static StateVector normalized(Dims dims, Eigen::VectorXcd amps);

    const Dims &dims() const {
        return dims_;
    }
    const Eigen::VectorXcd &amps() const {
        return amps_;
    }
    std::size_t dimension() const {
        return static_cast<std::size_t>(amps_.size());
    }
    std::size_t parties() const {
        return dims_.size();
    }

   private:
    Dims dims_;
    Eigen::VectorXcd amps_;
};

/// Square complex matrix over a tensor-product space.
class OperatorMatrix {
   public:
    OperatorMatrix(Dims dims, Eigen::MatrixXcd entries);

    static OperatorMatrix identity(Dims dims);

    const Dims &dims() const {
        return dims_;
    }
    const Eigen::MatrixXcd &entries() const {
        return entries_;
    }
    std::size_t dimension() const {
        return static_cast<std::size_t>(entries_.rows());
    }

    bool is_unitary(double tol = kOperatorTolerance) const;
    bool is_hermitian(double tol = kOperatorTolerance) const;

    OperatorMatrix adjoint() const;
    OperatorMatrix operator*(const OperatorMatrix &rhs) const;
    StateVector apply(const StateVector &state) const;

   private:
    Dims dims_;
    Eigen::MatrixXcd entries_;
};

StateVector tensor(std::span<const StateVector> states);
OperatorMatrix tensor(std::span<const OperatorMatrix> ops);
StateVector tensor(std::initializer_list<StateVector> states);
OperatorMatrix tensor(std::initializer_list<OperatorMatrix> ops);

/// exp(i * scale * H) by scaling and squaring of a Taylor series.
OperatorMatrix expm_oracle(const OperatorMatrix &hamiltonian, double scale);

/// min over phi of max_ij |A_ij - e^{i phi} B_ij|.
///
/// When the Hilbert-Schmidt-optimal phase already gives a distance below
/// 1e-12 that value is returned without further refinement.
double op_distance_phase_invariant(const OperatorMatrix &a, const OperatorMatrix &b);
double op_distance_phase_invariant(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

struct ProjectionResult {
    std::optional<StateVector> state;  // empty for a zero-probability outcome
    double probability;
};

/// Probability below which a measurement outcome is treated as impossible.
inline constexpr double kZeroProbability = 1e-24;

/// Measures `party` against the (normalized) vector `onto`, removing it.
ProjectionResult project_subsystem(const StateVector &state, std::size_t party, const Eigen::VectorXcd &onto);

namespace detail {

/// <onto| contracted into subsystem `party`; the result lives on the other subsystems and is unnormalized.
Eigen::VectorXcd contract_subsystem(
    const Eigen::VectorXcd &amps, const Dims &dims, std::size_t party, const Eigen::VectorXcd &onto);

/// In-place application of `op` (acting on `targets` in the listed order) to a joint vector.
void apply_to_subsystems(
    Eigen::VectorXcd &amps, const Dims &dims, std::span<const std::size_t> targets, const Eigen::MatrixXcd &op);

/// Same as apply_to_subsystems but on every column of `columns`.
void apply_to_subsystems_columns(
    Eigen::MatrixXcd &columns, const Dims &dims, std::span<const std::size_t> targets, const Eigen::MatrixXcd &op);

Dims remove_party(const Dims &dims, std::size_t party);

}  // namespace detail

namespace gates {

Eigen::MatrixXcd identity(std::size_t d);
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
Eigen::Matrix2cd hadamard();
/// Pauli by index 0..3 = I, X, Y, Z.
Eigen::Matrix2cd pauli(int index);

/// sigma_z on every one of n qubits.
OperatorMatrix z_string(std::size_t n);

/// U(alpha) = exp(i alpha Z^{(x)n}), built from its diagonal.
OperatorMatrix collective_z_rotation(double alpha, std::size_t n);

}  // namespace gates

}  // namespace stator

#endif
