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

#include "stator/entropy.hpp"

#include <cmath>
#include <numbers>

#include "stator/error.hpp"

using namespace stator;

double stator::binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("binary_entropy: probability outside [0, 1]");
    }
    if (p == 0.0 || p == 1.0) {
        return 0.0;
    }
    // log1p keeps the (1-p) term accurate for tiny p, which the small-angle costs depend on.
    double q = 1.0 - p;
    double a = -p * std::log2(p);
    double b = p <= 0.5 ? -q * std::log1p(-p) / std::numbers::ln2 : -q * std::log2(q);
    return a + b;
}

double stator::shannon_entropy(std::span<const double> probabilities) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p < 0.0 || p > 1.0 + 1e-12) {
            throw ValidationError("shannon_entropy: probability outside [0, 1]");
        }
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

StateVector stator::resource_state(double beta, std::size_t parties) {
    if (parties < 2) {
        throw ValidationError("resource_state needs at least two parties");
    }
    Dims dims(parties, 2);
    std::size_t n = joint_dimension(dims);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    amps[0] = std::cos(beta);
    amps[static_cast<Eigen::Index>(n - 1)] = Complex(0.0, std::sin(beta));
    return StateVector(std::move(dims), std::move(amps));
}

double stator::resource_entanglement(double beta) {
    double s = std::sin(beta);
    double p = s * s;
    return binary_entropy(std::min(1.0, std::max(0.0, p)));
}

double stator::entanglement_entropy(const StateVector &state, std::size_t party) {
    const Dims &dims = state.dims();
    if (party >= dims.size()) {
        throw ValidationError("party index out of range");
    }
    std::size_t inner = 1;
    for (std::size_t p = party + 1; p < dims.size(); p++) {
        inner *= dims[p];
    }
    const std::size_t d = dims[party];
    const std::size_t outer = state.dimension() / (d * inner);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const auto &a = state.amps();
    for (std::size_t hi = 0; hi < outer; hi++) {
        for (std::size_t lo = 0; lo < inner; lo++) {
            for (std::size_t i = 0; i < d; i++) {
                Complex ai = a[static_cast<Eigen::Index>((hi * d + i) * inner + lo)];
                for (std::size_t j = 0; j < d; j++) {
                    Complex aj = a[static_cast<Eigen::Index>((hi * d + j) * inner + lo)];
                    rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += ai * std::conj(aj);
                }
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); k++) {
        double lambda = solver.eigenvalues()[k];
        if (lambda > 1e-300) {
            h -= lambda * std::log2(lambda);
        }
    }
    return h;
}
