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

#include "stator/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "stator/error.hpp"

using namespace stator;

namespace {

void check_dims(const Dims &dims) {
    if (dims.empty()) {
        throw ValidationError("dims must name at least one subsystem");
    }
    for (std::size_t d : dims) {
        if (d == 0) {
            throw ValidationError("subsystem dimension must be positive");
        }
    }
}

double max_abs(const Eigen::MatrixXcd &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::vector<std::size_t> strides_of(const Dims &dims) {
    std::vector<std::size_t> strides(dims.size());
    std::size_t s = 1;
    for (std::size_t p = dims.size(); p-- > 0;) {
        strides[p] = s;
        s *= dims[p];
    }
    return strides;
}

}  // namespace

std::size_t stator::joint_dimension(const Dims &dims) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) {
            throw ValidationError("subsystem dimension must be positive");
        }
        if (total > kMaxJointDimension / d) {
            throw DimensionError("joint dimension exceeds 2^22");
        }
        total *= d;
    }
    return total;
}

StateVector::StateVector(Dims dims, Eigen::VectorXcd amps) : dims_(std::move(dims)), amps_(std::move(amps)) {
    check_dims(dims_);
    if (static_cast<std::size_t>(amps_.size()) != joint_dimension(dims_)) {
        throw ValidationError(
            "amplitude count " + std::to_string(amps_.size()) + " does not match product of dims " +
            std::to_string(joint_dimension(dims_)));
    }
    double n2 = amps_.squaredNorm();
    if (!(std::abs(n2 - 1.0) <= kNormTolerance)) {
        throw ValidationError("state is not normalized (squared norm " + std::to_string(n2) + ")");
    }
}

StateVector StateVector::basis(Dims dims, std::size_t index) {
    std::size_t n = joint_dimension(dims);
    if (index >= n) {
        throw ValidationError("basis index out of range");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(dims), std::move(amps));
}

StateVector StateVector::normalized(Dims dims, Eigen::VectorXcd amps) {
    double n = amps.norm();
    if (!(n * n > kZeroProbability)) {
        throw ZeroProbabilityError("cannot normalize a zero vector");
    }
    amps /= n;
    return StateVector(std::move(dims), std::move(amps));
}

OperatorMatrix::OperatorMatrix(Dims dims, Eigen::MatrixXcd entries) : dims_(std::move(dims)), entries_(std::move(entries)) {
    check_dims(dims_);
    std::size_t n = joint_dimension(dims_);
    if (static_cast<std::size_t>(entries_.rows()) != n || static_cast<std::size_t>(entries_.cols()) != n) {
        throw ValidationError("operator must be square with side equal to the product of dims");
    }
}

OperatorMatrix OperatorMatrix::identity(Dims dims) {
    auto n = static_cast<Eigen::Index>(joint_dimension(dims));
    return OperatorMatrix(std::move(dims), Eigen::MatrixXcd::Identity(n, n));
}

bool OperatorMatrix::is_unitary(double tol) const {
    auto n = entries_.rows();
    return max_abs(entries_.adjoint() * entries_ - Eigen::MatrixXcd::Identity(n, n)) <= tol;
}

bool OperatorMatrix::is_hermitian(double tol) const {
    return max_abs(entries_ - entries_.adjoint()) <= tol;
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return OperatorMatrix(dims_, entries_.adjoint());
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix &rhs) const {
    if (dims_ != rhs.dims_) {
        throw ValidationError("cannot compose operators over different dims");
    }
    return OperatorMatrix(dims_, entries_ * rhs.entries_);
}

StateVector OperatorMatrix::apply(const StateVector &state) const {
    if (dims_ != state.dims()) {
        throw ValidationError("operator and state dims differ");
    }
    return StateVector::normalized(dims_, entries_ * state.amps());
}

StateVector stator::tensor(std::span<const StateVector> states) {
    if (states.empty()) {
        throw ValidationError("tensor of an empty list");
    }
    Dims dims;
    for (const auto &s : states) {
        dims.insert(dims.end(), s.dims().begin(), s.dims().end());
    }
    joint_dimension(dims);
    Eigen::VectorXcd acc = states[0].amps();
    for (std::size_t k = 1; k < states.size(); k++) {
        const auto &b = states[k].amps();
        Eigen::VectorXcd next(acc.size() * b.size());
        for (Eigen::Index i = 0; i < acc.size(); i++) {
            next.segment(i * b.size(), b.size()) = acc[i] * b;
        }
        acc = std::move(next);
    }
    return StateVector::normalized(std::move(dims), std::move(acc));
}

OperatorMatrix stator::tensor(std::span<const OperatorMatrix> ops) {
    if (ops.empty()) {
        throw ValidationError("tensor of an empty list");
    }
    Dims dims;
    for (const auto &o : ops) {
        dims.insert(dims.end(), o.dims().begin(), o.dims().end());
    }
    joint_dimension(dims);
    Eigen::MatrixXcd acc = ops[0].entries();
    for (std::size_t k = 1; k < ops.size(); k++) {
        const auto &b = ops[k].entries();
        Eigen::MatrixXcd next(acc.rows() * b.rows(), acc.cols() * b.cols());
        for (Eigen::Index i = 0; i < acc.rows(); i++) {
            for (Eigen::Index j = 0; j < acc.cols(); j++) {
                next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
            }
        }
        acc = std::move(next);
    }
    return OperatorMatrix(std::move(dims), std::move(acc));
}

StateVector stator::tensor(std::initializer_list<StateVector> states) {
    return tensor(std::span<const StateVector>(states.begin(), states.size()));
}

OperatorMatrix stator::tensor(std::initializer_list<OperatorMatrix> ops) {
    return tensor(std::span<const OperatorMatrix>(ops.begin(), ops.size()));
}

OperatorMatrix stator::expm_oracle(const OperatorMatrix &hamiltonian, double scale) {
    if (!hamiltonian.is_hermitian()) {
        throw ValidationError("expm_oracle requires a hermitian generator");
    }
    if (!std::isfinite(scale)) {
        throw ValidationError("expm_oracle scale must be finite");
    }
    const auto n = hamiltonian.entries().rows();
    Eigen::MatrixXcd a = Complex(0.0, scale) * hamiltonian.entries();

    // Scale until the 1-norm is at most 1/2 so the series converges quickly.
    double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    }
    a /= std::ldexp(1.0, squarings);

    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 1; k < 200; k++) {
        term = (term * a) / static_cast<double>(k);
        sum += term;
        if (max_abs(term) < 1e-16) {
            break;
        }
    }
    for (int s = 0; s < squarings; s++) {
        sum = sum * sum;
    }
    return OperatorMatrix(hamiltonian.dims(), std::move(sum));
}

double stator::op_distance_phase_invariant(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("op_distance_phase_invariant: shape mismatch");
    }
    if (max_abs(b) == 0.0) {
        return max_abs(a);
    }
    auto dist = [&](double phi) {
        return max_abs(a - std::polar(1.0, phi) * b);
    };
    const double phi0 = std::arg((b.adjoint() * a).trace());
    double best = dist(phi0);
    if (best < 1e-12) {
        return best;
    }

    constexpr int kGrid = 64;
    constexpr double kStep = 2.0 * std::numbers::pi / kGrid;
    double best_phi = phi0;
    for (int k = 1; k < kGrid; k++) {
        double phi = phi0 + k * kStep;
        double d = dist(phi);
        if (d < best) {
            best = d;
            best_phi = phi;
        }
    }

    // Golden-section refinement inside the neighbouring grid cells.
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_phi - kStep;
    double hi = best_phi + kStep;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = dist(x1);
    double f2 = dist(x2);
    while (hi - lo > 1e-13) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = dist(x2);
        }
    }
    return std::min({best, f1, f2});
}

double stator::op_distance_phase_invariant(const OperatorMatrix &a, const OperatorMatrix &b) {
    if (a.dims() != b.dims()) {
        throw ValidationError("op_distance_phase_invariant: dims mismatch");
    }
    return op_distance_phase_invariant(a.entries(), b.entries());
}

Dims stator::detail::remove_party(const Dims &dims, std::size_t party) {
    Dims out;
    for (std::size_t p = 0; p < dims.size(); p++) {
        if (p != party) {
            out.push_back(dims[p]);
        }
    }
    return out;
}

Eigen::VectorXcd stator::detail::contract_subsystem(
    const Eigen::VectorXcd &amps, const Dims &dims, std::size_t party, const Eigen::VectorXcd &onto) {
    if (party >= dims.size()) {
        throw ValidationError("party index out of range");
    }
    const std::size_t d = dims[party];
    if (static_cast<std::size_t>(onto.size()) != d) {
        throw ValidationError("projection vector dimension does not match the party");
    }
    std::size_t inner = 1;
    for (std::size_t p = party + 1; p < dims.size(); p++) {
        inner *= dims[p];
    }
    const std::size_t total = static_cast<std::size_t>(amps.size());
    const std::size_t outer = total / (d * inner);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(outer * inner));
    for (std::size_t hi = 0; hi < outer; hi++) {
        for (std::size_t k = 0; k < d; k++) {
            Complex c = std::conj(onto[static_cast<Eigen::Index>(k)]);
            if (c == Complex(0.0)) {
                continue;
            }
            std::size_t src = (hi * d + k) * inner;
            std::size_t dst = hi * inner;
            for (std::size_t lo = 0; lo < inner; lo++) {
                out[static_cast<Eigen::Index>(dst + lo)] += c * amps[static_cast<Eigen::Index>(src + lo)];
            }
        }
    }
    return out;
}

namespace {

struct SubsystemLayout {
    std::vector<std::size_t> offsets;  // joint-index offset of every target digit combination
    std::vector<std::size_t> bases;    // joint indices whose target digits are all zero
};

SubsystemLayout layout_for(const Dims &dims, std::span<const std::size_t> targets) {
    auto strides = strides_of(dims);
    std::size_t sub = 1;
    for (std::size_t t : targets) {
        if (t >= dims.size()) {
            throw ValidationError("target subsystem out of range");
        }
        sub *= dims[t];
    }
    for (std::size_t i = 0; i < targets.size(); i++) {
        for (std::size_t j = i + 1; j < targets.size(); j++) {
            if (targets[i] == targets[j]) {
                throw ValidationError("target subsystems must be distinct");
            }
        }
    }
    SubsystemLayout layout;
    layout.offsets.resize(sub);
    for (std::size_t c = 0; c < sub; c++) {
        std::size_t rem = c;
        std::size_t off = 0;
        for (std::size_t i = targets.size(); i-- > 0;) {
            std::size_t t = targets[i];
            off += (rem % dims[t]) * strides[t];
            rem /= dims[t];
        }
        layout.offsets[c] = off;
    }
    std::size_t total = joint_dimension(dims);
    for (std::size_t idx = 0; idx < total; idx++) {
        bool zero = true;
        for (std::size_t t : targets) {
            if ((idx / strides[t]) % dims[t] != 0) {
                zero = false;
                break;
            }
        }
        if (zero) {
            layout.bases.push_back(idx);
        }
    }
    return layout;
}

}  // namespace

void stator::detail::apply_to_subsystems(
    Eigen::VectorXcd &amps, const Dims &dims, std::span<const std::size_t> targets, const Eigen::MatrixXcd &op) {
    auto layout = layout_for(dims, targets);
    const auto sub = static_cast<Eigen::Index>(layout.offsets.size());
    if (op.rows() != sub || op.cols() != sub) {
        throw ValidationError("operator side does not match the targeted subsystems");
    }
    Eigen::VectorXcd v(sub);
    for (std::size_t base : layout.bases) {
        for (Eigen::Index c = 0; c < sub; c++) {
            v[c] = amps[static_cast<Eigen::Index>(base + layout.offsets[c])];
        }
        Eigen::VectorXcd w = op * v;
        for (Eigen::Index c = 0; c < sub; c++) {
            amps[static_cast<Eigen::Index>(base + layout.offsets[c])] = w[c];
        }
    }
}

void stator::detail::apply_to_subsystems_columns(
    Eigen::MatrixXcd &columns, const Dims &dims, std::span<const std::size_t> targets, const Eigen::MatrixXcd &op) {
    auto layout = layout_for(dims, targets);
    const auto sub = static_cast<Eigen::Index>(layout.offsets.size());
    if (op.rows() != sub || op.cols() != sub) {
        throw ValidationError("operator side does not match the targeted subsystems");
    }
    Eigen::MatrixXcd v(sub, columns.cols());
    for (std::size_t base : layout.bases) {
        for (Eigen::Index c = 0; c < sub; c++) {
            v.row(c) = columns.row(static_cast<Eigen::Index>(base + layout.offsets[c]));
        }
        Eigen::MatrixXcd w = op * v;
        for (Eigen::Index c = 0; c < sub; c++) {
            columns.row(static_cast<Eigen::Index>(base + layout.offsets[c])) = w.row(c);
        }
    }
}

ProjectionResult stator::project_subsystem(const StateVector &state, std::size_t party, const Eigen::VectorXcd &onto) {
    if (party >= state.parties()) {
        throw ValidationError("party index out of range");
    }
    if (std::abs(onto.squaredNorm() - 1.0) > kNormTolerance) {
        throw ValidationError("projection vector must be normalized");
    }
    if (state.parties() < 2) {
        throw ValidationError("cannot remove the only subsystem");
    }
    Eigen::VectorXcd out = detail::contract_subsystem(state.amps(), state.dims(), party, onto);
    double p = out.squaredNorm();
    if (!(p > kZeroProbability)) {
        return {std::nullopt, p};
    }
    out /= std::sqrt(p);
    return {StateVector(detail::remove_party(state.dims(), party), std::move(out)), p};
}

Eigen::MatrixXcd stator::gates::identity(std::size_t d) {
    auto n = static_cast<Eigen::Index>(d);
    return Eigen::MatrixXcd::Identity(n, n);
}

Eigen::Matrix2cd stator::gates::pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd stator::gates::pauli_y() {
    Eigen::Matrix2cd m;
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Eigen::Matrix2cd stator::gates::pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::Matrix2cd stator::gates::hadamard() {
    Eigen::Matrix2cd m;
    const double r = 1.0 / std::sqrt(2.0);
    m << r, r, r, -r;
    return m;
}

Eigen::Matrix2cd stator::gates::pauli(int index) {
    switch (index) {
        case 0:
            return Eigen::Matrix2cd::Identity();
        case 1:
            return pauli_x();
        case 2:
            return pauli_y();
        case 3:
            return pauli_z();
        default:
            throw ValidationError("pauli index must be 0..3");
    }
}

OperatorMatrix stator::gates::z_string(std::size_t n) {
    Dims dims(n, 2);
    std::size_t total = joint_dimension(dims);
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < total; i++) {
        diag[static_cast<Eigen::Index>(i)] = (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
    }
    return OperatorMatrix(std::move(dims), diag.asDiagonal());
}

OperatorMatrix stator::gates::collective_z_rotation(double alpha, std::size_t n) {
    Dims dims(n, 2);
    std::size_t total = joint_dimension(dims);
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < total; i++) {
        double sign = (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
        diag[static_cast<Eigen::Index>(i)] = std::polar(1.0, sign * alpha);
    }
    return OperatorMatrix(std::move(dims), diag.asDiagonal());
}
