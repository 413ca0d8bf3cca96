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

#ifndef STATOR_ERROR_HPP
#define STATOR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stator {

/// Bad argument: wrong shape, out-of-domain angle, non-hermitian input, inconsistent schedule.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Joint Hilbert space would exceed the dense-simulation guard.
struct DimensionError : std::length_error {
    explicit DimensionError(const std::string &what) : std::length_error(what) {
    }
};

/// A forced measurement outcome has (numerically) zero probability.
struct ZeroProbabilityError : std::runtime_error {
    explicit ZeroProbabilityError(const std::string &what) : std::runtime_error(what) {
    }
};

/// Something that must hold by construction did not (distance, norm, leakage).
struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string &what) : std::logic_error(what) {
    }
};

}  // namespace stator

#endif
