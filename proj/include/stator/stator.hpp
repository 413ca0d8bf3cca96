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

#ifndef STATOR_STATOR_HPP
#define STATOR_STATOR_HPP

#include <cstddef>
#include <vector>

#include "stator/linalg.hpp"

namespace stator {

struct StatorTerm {
    std::size_t label;
    Complex coefficient;
    std::vector<Eigen::MatrixXcd> local_ops;  // one unitary per party
};

/// Hybrid state-operator object sum_k c_k |k>^{(x)copies} (x) O_k^{(1)} (x) ... (x) O_k^{(N)}.
///
/// Acting on a system state |chi> it yields sum_k c_k |k...k> (x) O_k|chi>, with
/// the resource registers first in the joint ordering.
class Stator {
   public:
    Stator(std::size_t resource_dim, std::size_t resource_copies, std::vector<StatorTerm> terms);

    std::size_t resource_dim() const {
        return resource_dim_;
    }
    std::size_t resource_copies() const {
        return resource_copies_;
    }
    const std::vector<StatorTerm> &terms() const {
        return terms_;
    }
    const Dims &system_dims() const {
        return system_dims_;
    }

    StateVector apply(const StateVector &system) const;

    /// sum_k <bra|k> c_k O_k when a single resource register remains (unnormalized).
    OperatorMatrix contract_resource(const Eigen::VectorXcd &bra) const;

   private:
    std::size_t resource_dim_;
    std::size_t resource_copies_;
    std::vector<StatorTerm> terms_;
    Dims system_dims_;
};

}  // namespace stator

#endif
