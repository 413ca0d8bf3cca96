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

#include "stator/ham_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "stator/error.hpp"

using namespace stator;

namespace {

constexpr double kEndpointTolerance = 1e-12;

std::string factor_label(std::size_t term, std::size_t factor, std::size_t terms) {
    if (terms == 1) {
        return "factor " + std::to_string(factor);
    }
    return "term " + std::to_string(term) + " factor " + std::to_string(factor);
}

/// How one party's carrier is driven: which levels start flipped and when the others flip.
struct PartyPlan {
    std::size_t dim = 0;
    std::vector<std::size_t> initially_flipped;            // a_l = -1
    std::vector<double> switch_times;                      // distinct p_l in (0, 1), ascending
    std::vector<std::vector<std::size_t>> switch_levels;  // levels flipping at each time
};

PartyPlan plan_for(const std::vector<double> &a) {
    PartyPlan plan;
    plan.dim = a.size();
    std::vector<std::pair<double, std::size_t>> interior;
    for (std::size_t l = 0; l < a.size(); l++) {
        double p = (a[l] + 1.0) / 2.0;
        if (p <= kEndpointTolerance) {
            plan.initially_flipped.push_back(l);
        } else if (p < 1.0 - kEndpointTolerance) {
            interior.emplace_back(p, l);
        }
    }
    std::stable_sort(interior.begin(), interior.end(), [](const auto &x, const auto &y) {
        return x.first < y.first;
    });
    for (const auto &[p, l] : interior) {
        if (!plan.switch_times.empty() && std::abs(plan.switch_times.back() - p) <= kEndpointTolerance) {
            plan.switch_levels.back().push_back(l);
        } else {
            plan.switch_times.push_back(p);
            plan.switch_levels.push_back({l});
        }
    }
    return plan;
}

/// X on the carrier for each listed level of A_jB_j.
Eigen::MatrixXcd carrier_flip(std::size_t dim, const std::vector<std::size_t> &levels) {
    auto n = static_cast<Eigen::Index>(2 * dim);
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t l : levels) {
        auto i = static_cast<Eigen::Index>(2 * l);
        op(i, i) = 0.0;
        op(i + 1, i + 1) = 0.0;
        op(i, i + 1) = 1.0;
        op(i + 1, i) = 1.0;
    }
    return op;
}

Eigen::MatrixXcd kron_with_carrier(const Eigen::MatrixXcd &m) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * m.rows(), 2 * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            out(2 * i, 2 * j) = m(i, j);
            out(2 * i + 1, 2 * j + 1) = m(i, j);
        }
    }
    return out;
}

using Inner = std::function<std::vector<Primitive>(double)>;

/// Splits a duration tau at the party's switching times, running `inner` on each segment.
std::vector<Primitive> interleave(std::size_t party, const PartyPlan &plan, double tau, const Inner &inner) {
    std::vector<Primitive> out;
    if (tau == 0.0) {
        return out;
    }
    auto append = [&](std::vector<Primitive> v) {
        out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    };
    if (plan.switch_times.empty()) {
        append(inner(tau));
        return out;
    }
    double prev = 0.0;
    std::vector<std::size_t> flipped;
    for (std::size_t i = 0; i < plan.switch_times.size(); i++) {
        double seg = (plan.switch_times[i] - prev) * tau;
        if (seg != 0.0) {
            append(inner(seg));
        }
        out.emplace_back(LocalLayer{party, carrier_flip(plan.dim, plan.switch_levels[i]), LayerKind::kSwap});
        flipped.insert(flipped.end(), plan.switch_levels[i].begin(), plan.switch_levels[i].end());
        prev = plan.switch_times[i];
    }
    double last = (1.0 - prev) * tau;
    if (last != 0.0) {
        append(inner(last));
    }
    std::sort(flipped.begin(), flipped.end());
    out.emplace_back(LocalLayer{party, carrier_flip(plan.dim, flipped), LayerKind::kSwap});
    return out;
}

struct CompiledTerm {
    DiagonalizedForm form;
    std::vector<PartyPlan> plans;
};

CompiledTerm prepare(const TensorProductTerm &term) {
    CompiledTerm c{diagonalize(term), {}};
    for (const auto &a : c.form.diagonals) {
        c.plans.push_back(plan_for(a));
    }
    return c;
}

/// Nested chain: the outermost level drives party 0, the innermost rotation acts on all carriers.
std::vector<Primitive> body(const CompiledTerm &term, double tau) {
    const std::size_t n = term.plans.size();
    std::function<std::vector<Primitive>(std::size_t, double)> level = [&](std::size_t j, double t) {
        if (j == n) {
            return std::vector<Primitive>{ZZRotation{t}};
        }
        return interleave(j, term.plans[j], t, [&](double s) {
            return level(j + 1, s);
        });
    };
    return level(0, tau);
}

void basis_layers(const CompiledTerm &term, bool into, std::vector<Primitive> &out) {
    for (std::size_t j = 0; j < term.plans.size(); j++) {
        const auto &plan = term.plans[j];
        Eigen::MatrixXcd flip = carrier_flip(plan.dim, plan.initially_flipped);
        Eigen::MatrixXcd q = kron_with_carrier(term.form.locals[j]);
        Eigen::MatrixXcd op = into ? Eigen::MatrixXcd(flip * q.adjoint()) : Eigen::MatrixXcd(q * flip);
        out.emplace_back(LocalLayer{j, std::move(op), LayerKind::kBasisChange});
    }
}

void finish(CompiledSchedule &s) {
    s.total_angle = 0.0;
    for (const auto &p : s.primitives) {
        if (const auto *z = std::get_if<ZZRotation>(&p)) {
            s.total_angle += std::abs(z->angle);
        }
    }
    s.linear_ebits = kOptimizedEbitsPerRadian * s.total_angle;
    s.no_interior_events = swap_layer_count(s) == 0;
}

CompiledSchedule assemble(const HamiltonianSpec &spec, const std::vector<CompiledTerm> &terms) {
    CompiledSchedule s;
    s.system_dims = spec.dims();
    s.terms = terms.size();
    s.slices = spec.slices;
    for (std::size_t j = 0; j < s.system_dims.size(); j++) {
        s.primitives.emplace_back(AncillaPrep{j, s.system_dims[j]});
    }
    const double t = spec.signed_time();
    const double m = static_cast<double>(spec.slices);
    auto active = [&](const CompiledTerm &c) {
        return c.form.delta != 0.0 && t != 0.0;
    };
    if (terms.size() == 1) {
        // Single term: change basis once, then all the slices.
        const auto &c = terms[0];
        if (active(c)) {
            basis_layers(c, true, s.primitives);
            for (std::size_t k = 0; k < spec.slices; k++) {
                auto b = body(c, t * c.form.delta / m);
                s.primitives.insert(s.primitives.end(), b.begin(), b.end());
            }
            basis_layers(c, false, s.primitives);
        }
    } else {
        for (std::size_t k = 0; k < spec.slices; k++) {
            for (const auto &c : terms) {
                if (!active(c)) {
                    continue;
                }
                basis_layers(c, true, s.primitives);
                auto b = body(c, t * c.form.delta / m);
                s.primitives.insert(s.primitives.end(), b.begin(), b.end());
                basis_layers(c, false, s.primitives);
            }
        }
    }
    for (std::size_t j = 0; j < s.system_dims.size(); j++) {
        s.primitives.emplace_back(SubspaceRestrict{j});
    }
    finish(s);
    return s;
}

}  // namespace

Dims HamiltonianSpec::dims() const {
    if (terms.empty() || terms[0].factors.empty()) {
        throw ValidationError("hamiltonian has no factors");
    }
    Dims d;
    for (const auto &f : terms[0].factors) {
        d.push_back(static_cast<std::size_t>(f.rows()));
    }
    return d;
}

void HamiltonianSpec::validate() const {
    if (terms.empty()) {
        throw ValidationError("hamiltonian needs at least one term");
    }
    if (!std::isfinite(time)) {
        throw ValidationError("time must be finite");
    }
    if (slices < 1) {
        throw ValidationError("slices must be at least 1");
    }
    const std::size_t n = terms[0].factors.size();
    for (std::size_t k = 0; k < terms.size(); k++) {
        const auto &factors = terms[k].factors;
        if (factors.empty()) {
            throw ValidationError((terms.size() == 1 ? std::string("hamiltonian") : "term " + std::to_string(k)) +
                                  " has no factors");
        }
        if (factors.size() != n) {
            throw ValidationError("term " + std::to_string(k) + " has a different number of parties");
        }
        for (std::size_t j = 0; j < factors.size(); j++) {
            const auto &h = factors[j];
            std::string label = factor_label(k, j, terms.size());
            if (h.rows() != h.cols() || h.rows() == 0) {
                throw ValidationError(label + " must be a non-empty square matrix");
            }
            if (static_cast<std::size_t>(h.rows()) > kMaxLocalDimension) {
                throw ValidationError(label + " has dimension above 4");
            }
            if (h.rows() != terms[0].factors[j].rows()) {
                throw ValidationError(label + " dimension differs from term 0");
            }
            if (!h.allFinite()) {
                throw ValidationError(label + " has non-finite entries");
            }
            if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kOperatorTolerance) {
                throw ValidationError(label + " is not hermitian");
            }
        }
    }
    Dims ext;
    for (std::size_t d : dims()) {
        ext.push_back(2 * d);
    }
    joint_dimension(ext);
}

OperatorMatrix HamiltonianSpec::total() const {
    validate();
    Dims d = dims();
    auto n = static_cast<Eigen::Index>(joint_dimension(d));
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const auto &term : terms) {
        std::vector<OperatorMatrix> ops;
        for (const auto &f : term.factors) {
            ops.emplace_back(Dims{static_cast<std::size_t>(f.rows())}, f);
        }
        acc += tensor(std::span<const OperatorMatrix>(ops)).entries();
    }
    return OperatorMatrix(std::move(d), std::move(acc));
}

double HamiltonianSpec::signed_time() const {
    return convention == TimeConvention::kPlusI ? time : -time;
}

Dims DiagonalizedForm::dims() const {
    Dims d;
    for (const auto &q : locals) {
        d.push_back(static_cast<std::size_t>(q.rows()));
    }
    return d;
}

DiagonalizedForm stator::diagonalize(const TensorProductTerm &term) {
    HamiltonianSpec check;
    check.terms.push_back(term);
    check.validate();

    DiagonalizedForm form;
    form.delta = 1.0;
    for (const auto &h : term.factors) {
        const auto d = h.rows();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
        const auto &values = solver.eigenvalues();
        const auto &vectors = solver.eigenvectors();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
            return values[x] > values[y];
        });
        double norm = values.cwiseAbs().maxCoeff();
        Eigen::MatrixXcd q(d, d);
        std::vector<double> a;
        if (norm == 0.0) {
            q = Eigen::MatrixXcd::Identity(d, d);
            a.assign(static_cast<std::size_t>(d), 0.0);
        } else {
            for (Eigen::Index c = 0; c < d; c++) {
                Eigen::VectorXcd v = vectors.col(order[static_cast<std::size_t>(c)]);
                // Fix the phase: the first largest-magnitude component becomes real positive.
                double big = v.cwiseAbs().maxCoeff();
                Eigen::Index pivot = 0;
                while (std::abs(v[pivot]) < big - 1e-12) {
                    pivot++;
                }
                v *= std::conj(v[pivot]) / std::abs(v[pivot]);
                q.col(c) = v;
                a.push_back(values[order[static_cast<std::size_t>(c)]] / norm);
            }
        }
        form.locals.push_back(std::move(q));
        form.diagonals.push_back(std::move(a));
        form.factor_norms.push_back(norm);
        form.delta *= norm;
    }
    return form;
}

DiagonalizedForm stator::diagonalize(const HamiltonianSpec &spec) {
    if (spec.terms.size() != 1) {
        throw ValidationError("diagonalize expects a single tensor-product term");
    }
    return diagonalize(spec.terms[0]);
}

std::vector<Primitive> stator::compile_factor_step(std::size_t party, const DiagonalizedForm &form, double dt) {
    if (party >= form.diagonals.size()) {
        throw ValidationError("party index out of range");
    }
    PartyPlan plan = plan_for(form.diagonals[party]);
    return interleave(party, plan, dt * form.delta, [](double s) {
        return std::vector<Primitive>{ZZRotation{s}};
    });
}

CompiledSchedule stator::compile(const HamiltonianSpec &spec) {
    spec.validate();
    if (spec.terms.size() != 1) {
        throw ValidationError("compile expects a single tensor-product term; use compile_sum");
    }
    return assemble(spec, {prepare(spec.terms[0])});
}

CompiledSchedule stator::compile_sum(const HamiltonianSpec &spec) {
    spec.validate();
    if (spec.terms.size() == 1) {
        return compile(spec);
    }
    std::vector<CompiledTerm> terms;
    for (const auto &t : spec.terms) {
        terms.push_back(prepare(t));
    }
    return assemble(spec, terms);
}

double stator::cost_estimate(const CompiledSchedule &schedule, CostMode mode, const EntanglementOptimizer *optimizer) {
    if (mode == CostMode::kLinear) {
        return kOptimizedEbitsPerRadian * schedule.total_angle;
    }
    if (optimizer == nullptr) {
        throw ValidationError("exact cost needs an optimizer");
    }
    double total = 0.0;
    for (const auto &p : schedule.primitives) {
        if (const auto *z = std::get_if<ZZRotation>(&p)) {
            if (reduce_angle(z->angle) > 0.0) {
                total += optimizer->optimize_schedule(std::abs(z->angle)).expected_ebits;
            }
        }
    }
    return total;
}

ScheduleEvaluation stator::evaluate(const CompiledSchedule &schedule) {
    const Dims &sys = schedule.system_dims;
    Dims ext;
    for (std::size_t d : sys) {
        ext.push_back(2 * d);
    }
    const std::size_t ext_n = joint_dimension(ext);
    const std::size_t sys_n = joint_dimension(sys);

    // Embedding: system digit a_j -> (a_j, carrier 0).
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ext_n), static_cast<Eigen::Index>(sys_n));
    for (std::size_t i = 0; i < sys_n; i++) {
        std::size_t rem = i, idx = 0, scale = 1;
        for (std::size_t j = sys.size(); j-- > 0;) {
            std::size_t a = rem % sys[j];
            rem /= sys[j];
            idx += (2 * a) * scale;
            scale *= ext[j];
        }
        v(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(i)) = 1.0;
    }

    // Carrier parity sign of every extended basis index.
    std::vector<double> parity(ext_n);
    for (std::size_t idx = 0; idx < ext_n; idx++) {
        std::size_t rem = idx;
        int ones = 0;
        for (std::size_t j = ext.size(); j-- > 0;) {
            ones += static_cast<int>((rem % ext[j]) % 2);
            rem /= ext[j];
        }
        parity[idx] = ones % 2 == 0 ? 1.0 : -1.0;
    }

    Eigen::MatrixXcd w = v;
    for (const auto &p : schedule.primitives) {
        if (const auto *layer = std::get_if<LocalLayer>(&p)) {
            std::size_t target = layer->party;
            detail::apply_to_subsystems_columns(w, ext, std::span<const std::size_t>(&target, 1), layer->op);
        } else if (const auto *z = std::get_if<ZZRotation>(&p)) {
            const Complex plus = std::polar(1.0, z->angle), minus = std::polar(1.0, -z->angle);
            for (std::size_t idx = 0; idx < ext_n; idx++) {
                w.row(static_cast<Eigen::Index>(idx)) *= parity[idx] > 0 ? plus : minus;
            }
        }
    }
    Eigen::MatrixXcd restricted = v.adjoint() * w;
    double leakage = (w - v * restricted).norm();
    return ScheduleEvaluation{OperatorMatrix(sys, std::move(restricted)), leakage};
}

std::size_t stator::swap_layer_count(const CompiledSchedule &schedule) {
    std::size_t count = 0;
    for (const auto &p : schedule.primitives) {
        if (const auto *layer = std::get_if<LocalLayer>(&p)) {
            count += layer->kind == LayerKind::kSwap ? 1 : 0;
        }
    }
    return count;
}

std::size_t stator::rotation_count(const CompiledSchedule &schedule) {
    std::size_t count = 0;
    for (const auto &p : schedule.primitives) {
        count += std::holds_alternative<ZZRotation>(p) ? 1 : 0;
    }
    return count;
}

CompileVerification stator::verify_schedule(const CompiledSchedule &schedule, const HamiltonianSpec &spec) {
    ScheduleEvaluation eval = evaluate(schedule);
    OperatorMatrix target = expm_oracle(spec.total(), spec.signed_time());
    return CompileVerification{op_distance_phase_invariant(eval.restricted, target), eval.leakage};
}

std::string stator::primitive_name(const Primitive &p) {
    struct Visitor {
        std::string operator()(const AncillaPrep &) const {
            return "ancilla_prep";
        }
        std::string operator()(const LocalLayer &l) const {
            return l.kind == LayerKind::kSwap ? "swap_layer" : "basis_layer";
        }
        std::string operator()(const ZZRotation &) const {
            return "zz_rotation";
        }
        std::string operator()(const SubspaceRestrict &) const {
            return "subspace_restrict";
        }
    };
    return std::visit(Visitor{}, p);
}
