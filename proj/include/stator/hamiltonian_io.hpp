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

#ifndef STATOR_HAMILTONIAN_IO_HPP
#define STATOR_HAMILTONIAN_IO_HPP

#include <string>

#include "stator/ham_compiler.hpp"

namespace stator {

/// Reads a Hamiltonian from JSON text.
///
///     {"factors": [M_1, ..., M_N],             // one tensor-product term (optional)
///      "terms": [{"factors": [...]}, ...],     // further terms (optional)
///      "time": t, "slices": m,                 // slices defaults to 1
///      "convention": "plus" | "minus"}         // exp(+itH) (default) or exp(-itH)
///
/// Each matrix is a list of rows; entries are [re, im] pairs or plain reals.
/// Errors are ValidationError with the offending path, e.g. "terms[1].factors[0]: ...".
HamiltonianSpec parse_hamiltonian(const std::string &text);

/// parse_hamiltonian on a file's contents. Throws std::runtime_error if the file can't be read.
HamiltonianSpec load_hamiltonian(const std::string &path);

/// Inverse of parse_hamiltonian (every term listed under "terms").
std::string hamiltonian_to_json(const HamiltonianSpec &spec);

}  // namespace stator

#endif
