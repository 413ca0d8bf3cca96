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

#include "stator/stator.hpp"

#include <cmath>
#include <set>

#include "stator/error.hpp"

using namespace stator;

Stator::Stator(std::size_t resource_dim, std::size_t resource_copies, std::vector<StatorTerm> terms)
    : resource_dim_(resource_dim), resource_copies_(resource_copies), terms_(std::move(terms)) {
    if (resource_dim_ == 0 || resource_copies_ == 0) {
        throw ValidationError("stator needs a non-empty resource register");
    }
    if (terms_.empty()) {
        throw ValidationError("stator needs at least one term");
    }
    std::set<std::size_t> labels;
    double weight = 0.0;
    for (std::size_t t = 0; t < terms_.size(); t++) {
        const auto &term = terms_[t];
        if (term.label >= resource_dim_ || !labels.insert(term.label).second) {
            throw ValidationError("stator labels must be distinct and below the resource dimension");
        }
        weight += std::norm(term.coefficient);
        Dims dims;
        for (const auto &op : term.local_ops) {
            if (op.rows() != op.cols() || op.rows() == 0) {
                throw ValidationError("stator local operators must be square");
            }
            auto n = op.rows();
            if ((op.adjoint() * op - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > kOperatorTolerance) {
                throw ValidationError("stator term " + std::to_string(t) + " has a non-unitary local operator");
            }
            dims.push_back(static_cast<std::size_t>(n));
        }
        if (t == 0) {
            system_dims_ = dims;
            if (dims.empty()) {
                throw ValidationError("stator terms need at least one local operator");
            }
        } else if (dims != system_dims_) {
            throw ValidationError("stator terms act on different system dims");
        }
    }
    if (std::abs(weight - 1.0) > kNormTolerance) {
        throw ValidationError("stator coefficients must have unit total weight");
    }
}

StateVector Stator::apply(const StateVector &system) const {
    if (system.dims() != system_dims_) {
        throw ValidationError("system dims do not match the stator");
    }
    Dims res_dims(resource_copies_, resource_dim_);
    Dims joint = res_dims;
    joint.insert(joint.end(), system_dims_.begin(), system_dims_.end());
    std::size_t total = joint_dimension(joint);
    const auto sys_n = static_cast<Eigen::Index>(system.dimension());

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    for (const auto &term : terms_) {
        Eigen::VectorXcd v = system.amps();
        for (std::size_t j = 0; j < term.local_ops.size(); j++) {
            std::size_t target = j;
            detail::apply_to_subsystems(v, system_dims_, std::span<const std::size_t>(&target, 1), term.local_ops[j]);
        }
        // |k k ... k> index in the resource block
        std::size_t idx = 0;
        for (std::size_t c = 0; c < resource_copies_; c++) {
            idx = idx * resource_dim_ + term.label;
        }
        out.segment(static_cast<Eigen::Index>(idx) * sys_n, sys_n) += term.coefficient * v;
    }
    return StateVector(std::move(joint), std::move(out));
}

OperatorMatrix Stator::contract_resource(const Eigen::VectorXcd &bra) const {
    if (resource_copies_ != 1) {
        throw ValidationError("contract_resource requires a single resource register");
    }
    if (static_cast<std::size_t>(bra.size()) != resource_dim_) {
        throw ValidationError("bra dimension does not match the resource");
    }
    auto n = static_cast<Eigen::Index>(joint_dimension(system_dims_));
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const auto &term : terms_) {
        Eigen::MatrixXcd op = term.local_ops[0];
        for (std::size_t j = 1; j < term.local_ops.size(); j++) {
            const auto &b = term.local_ops[j];
            Eigen::MatrixXcd next(op.rows() * b.rows(), op.cols() * b.cols());
            for (Eigen::Index r = 0; r < op.rows(); r++) {
                for (Eigen::Index c = 0; c < op.cols(); c++) {
                    next.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = op(r, c) * b;
                }
            }
            op = std::move(next);
        }
        acc += std::conj(bra[static_cast<Eigen::Index>(term.label)]) * term.coefficient * op;
    }
    return OperatorMatrix(system_dims_, std::move(acc));
}
