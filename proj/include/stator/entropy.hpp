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

#ifndef STATOR_ENTROPY_HPP
#define STATOR_ENTROPY_HPP

#include <cstddef>
#include <span>

#include "stator/linalg.hpp"

namespace stator {

/// -p log2 p - (1-p) log2(1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

/// Shannon entropy in bits of a probability vector (zeros skipped).
double shannon_entropy(std::span<const double> probabilities);

/// cos(beta)|0...0> + i sin(beta)|1...1> on `parties` qubits.
StateVector resource_state(double beta, std::size_t parties);

/// Entanglement of resource_state(beta, N) across any one-party cut: h(sin^2 beta).
double resource_entanglement(double beta);

/// Von Neumann entropy (bits) of one party's reduced density operator, via eigenvalues.
double entanglement_entropy(const StateVector &state, std::size_t party);

}  // namespace stator

#endif
