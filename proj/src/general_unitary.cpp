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

#include "stator/general_unitary.hpp"

#include <cmath>
#include <numbers>

#include "stator/error.hpp"

using namespace stator;

namespace {

constexpr double kDecompositionTolerance = 1e-9;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::MatrixXcd term_product(const std::vector<Eigen::MatrixXcd> &factors) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto &f : factors) {
        acc = kron(acc, f);
    }
    return acc;
}

Complex root_of_unity(std::size_t d, long long power) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(power % static_cast<long long>(d)) /
                   static_cast<double>(d);
    return std::polar(1.0, angle);
}

/// Resource (x) system after every party's controlled-V.
struct Joint {
    Dims dims;
    Eigen::VectorXcd amps;
};

Joint couple(const TensorDecomposition &decomp, const ResourceDesign &design, const Eigen::VectorXcd &system) {
    const std::size_t n = decomp.parties();
    const std::size_t d = decomp.resource_dim();
    const Dims sys = decomp.system_dims();
    Joint j;
    j.dims.assign(n, d);
    j.dims.insert(j.dims.end(), sys.begin(), sys.end());
    joint_dimension(j.dims);

    // sum_k mu_k |k...k> (x) system
    const std::size_t res_n = joint_dimension(Dims(n, d));
    Eigen::VectorXcd resource = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(res_n));
    for (std::size_t k = 0; k < d; k++) {
        std::size_t idx = 0;
        for (std::size_t p = 0; p < n; p++) {
            idx = idx * d + k;
        }
        resource[static_cast<Eigen::Index>(idx)] = design.mu[static_cast<Eigen::Index>(k)];
    }
    j.amps = kron(resource, system);

    for (std::size_t p = 0; p < n; p++) {
        auto da = static_cast<Eigen::Index>(sys[p]);
        Eigen::MatrixXcd controlled = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d) * da,
                                                             static_cast<Eigen::Index>(d) * da);
        for (std::size_t k = 0; k < d; k++) {
            controlled.block(static_cast<Eigen::Index>(k) * da, static_cast<Eigen::Index>(k) * da, da, da) =
                decomp.unitaries[k][p];
        }
        std::size_t targets[2] = {p, n + p};
        detail::apply_to_subsystems(j.amps, j.dims, targets, controlled);
    }
    return j;
}

/// Leader's phase correction on its register (subsystem 0 once the workers are gone).
void correct(Joint &j, std::size_t d, std::size_t outcome_sum) {
    Eigen::MatrixXcd phase = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; k++) {
        phase(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
            root_of_unity(d, -static_cast<long long>((k * outcome_sum) % d));
    }
    std::size_t target = 0;
    detail::apply_to_subsystems(j.amps, j.dims, std::span<const std::size_t>(&target, 1), phase);
}

void measure_front(Joint &j, const Eigen::VectorXcd &onto) {
    j.amps = detail::contract_subsystem(j.amps, j.dims, 0, onto);
    j.dims = detail::remove_party(j.dims, 0);
}

void require_pattern(const TensorDecomposition &decomp, std::span<const std::size_t> pattern, std::size_t leader) {
    const std::size_t d = decomp.resource_dim();
    if (pattern.size() + 1 != decomp.parties()) {
        throw ValidationError("need one outcome per worker");
    }
    for (std::size_t s : pattern) {
        if (s >= d) {
            throw ValidationError("worker outcome out of range");
        }
    }
    if (leader >= d) {
        throw ValidationError("leader outcome out of range");
    }
}

Eigen::VectorXcd normalized_or_throw(Eigen::VectorXcd v, const char *what) {
    double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError(what);
    }
    return v / n;
}

}  // namespace

std::size_t TensorDecomposition::parties() const {
    if (unitaries.empty()) {
        throw ValidationError("decomposition has no terms");
    }
    return unitaries[0].size();
}

Dims TensorDecomposition::system_dims() const {
    Dims d;
    for (const auto &v : unitaries.at(0)) {
        d.push_back(static_cast<std::size_t>(v.rows()));
    }
    return d;
}

OperatorMatrix TensorDecomposition::assemble() const {
    Dims dims = system_dims();
    auto n = static_cast<Eigen::Index>(joint_dimension(dims));
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k < lambdas.size(); k++) {
        acc += lambdas[k] * term_product(unitaries[k]);
    }
    return OperatorMatrix(std::move(dims), std::move(acc));
}

void TensorDecomposition::validate() const {
    if (lambdas.empty() || lambdas.size() != unitaries.size()) {
        throw ValidationError("need one unitary list per coefficient");
    }
    if (lambdas.size() > kMaxResourceDimension) {
        throw ValidationError("at most 8 terms are supported");
    }
    const std::size_t n = unitaries[0].size();
    if (n < 2) {
        throw ValidationError("need at least two parties");
    }
    Dims dims = system_dims();
    for (std::size_t k = 0; k < unitaries.size(); k++) {
        if (unitaries[k].size() != n) {
            throw ValidationError("term " + std::to_string(k) + " has the wrong number of parties");
        }
        if (!std::isfinite(lambdas[k].real()) || !std::isfinite(lambdas[k].imag())) {
            throw ValidationError("coefficient " + std::to_string(k) + " is not finite");
        }
        for (std::size_t p = 0; p < n; p++) {
            const auto &v = unitaries[k][p];
            if (v.rows() != v.cols() || static_cast<std::size_t>(v.rows()) != dims[p]) {
                throw ValidationError("term " + std::to_string(k) + " party " + std::to_string(p) +
                                      " has the wrong dimension");
            }
            Eigen::MatrixXcd gram = v.adjoint() * v;
            if ((gram - Eigen::MatrixXcd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff() > kDecompositionTolerance) {
                throw ValidationError("term " + std::to_string(k) + " party " + std::to_string(p) +
                                      " is not unitary");
            }
            if (k == 0 && (v - Eigen::MatrixXcd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff() >
                              kDecompositionTolerance) {
                throw ValidationError("term 0 must be the identity");
            }
        }
    }
    if (!assemble().is_unitary(kDecompositionTolerance)) {
        throw ValidationError("decomposition does not sum to a unitary");
    }
}

TensorDecomposition stator::canonical_two_qubit(double tx, double ty, double tz) {
    const double lim = std::numbers::pi / 4 + 1e-12;
    if (!(std::abs(tx) <= lim && std::abs(ty) <= lim && std::abs(tz) <= lim)) {
        throw ValidationError("canonical parameters must lie in [-pi/4, pi/4]");
    }
    const double cx = std::cos(tx), sx = std::sin(tx);
    const double cy = std::cos(ty), sy = std::sin(ty);
    const double cz = std::cos(tz), sz = std::sin(tz);
    TensorDecomposition out;
    out.lambdas = {
        Complex(cx * cy * cz, sx * sy * sz),
        Complex(cx * sy * sz, sx * cy * cz),
        Complex(sx * cy * sz, cx * sy * cz),
        Complex(sx * sy * cz, cx * cy * sz),
    };
    for (int k = 0; k < 4; k++) {
        out.unitaries.push_back({gates::pauli(k), gates::pauli(k)});
    }
    return out;
}

TensorDecomposition stator::collective_z_family(double a, std::size_t parties) {
    if (parties < 2) {
        throw ValidationError("need at least two parties");
    }
    TensorDecomposition out;
    out.lambdas = {Complex(std::cos(a), 0.0), Complex(0.0, std::sin(a))};
    out.unitaries.emplace_back(parties, gates::identity(2));
    out.unitaries.emplace_back(parties, Eigen::MatrixXcd(gates::pauli_z()));
    return out;
}

TensorDecomposition stator::qubit_zzz_zzi_family(double a, double b) {
    const Eigen::MatrixXcd i2 = gates::identity(2), z = gates::pauli_z();
    const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
    TensorDecomposition out;
    out.lambdas = {Complex(ca * cb, 0.0), Complex(0.0, sa * cb), Complex(0.0, ca * sb), Complex(-sa * sb, 0.0)};
    out.unitaries = {{i2, i2, i2}, {z, z, z}, {z, z, i2}, {i2, i2, z}};
    return out;
}

TensorDecomposition stator::qutrit_clock_family(double a, std::size_t parties) {
    if (parties < 2) {
        throw ValidationError("need at least two parties");
    }
    TensorDecomposition out;
    for (long long k = 0; k < 3; k++) {
        Complex lam = 0.0;
        for (long long m = 0; m < 3; m++) {
            double eig = 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / 3.0);
            lam += std::polar(1.0, a * eig) * root_of_unity(3, 3 * 3 - m * k);
        }
        out.lambdas.push_back(lam / 3.0);
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3);
        for (long long l = 0; l < 3; l++) {
            c(l, l) = root_of_unity(3, l * k);
        }
        out.unitaries.emplace_back(parties, c);
    }
    return out;
}

ResourceDesign stator::design_resource(
    const TensorDecomposition &decomp, DesignPolicy policy, std::optional<Eigen::VectorXcd> custom_mu) {
    decomp.validate();
    const auto d = static_cast<Eigen::Index>(decomp.resource_dim());
    ResourceDesign out{Eigen::VectorXcd::Zero(d), Eigen::VectorXcd::Zero(d)};
    if (policy == DesignPolicy::kSqrt) {
        for (Eigen::Index k = 0; k < d; k++) {
            Complex lam = decomp.lambdas[static_cast<std::size_t>(k)];
            double r = std::sqrt(std::abs(lam));
            out.mu[k] = r;
            // Phases go into nu so mu stays nonnegative and mu_k conj(nu_k) = lambda_k.
            out.nu[k] = r > 0.0 ? std::conj(lam) / r : Complex(0.0);
        }
        out.mu = normalized_or_throw(out.mu, "all coefficients are zero");
        out.nu = normalized_or_throw(out.nu, "all coefficients are zero");
    } else {
        if (!custom_mu || custom_mu->size() != d) {
            throw ValidationError("custom policy needs one mu amplitude per term");
        }
        Eigen::VectorXcd mu = normalized_or_throw(*custom_mu, "mu is the zero vector");
        for (Eigen::Index k = 0; k < d; k++) {
            Complex lam = decomp.lambdas[static_cast<std::size_t>(k)];
            if (std::abs(mu[k]) < 1e-14) {
                if (std::abs(lam) > 1e-14) {
                    throw ValidationError("mu_" + std::to_string(k) + " is zero but lambda_" + std::to_string(k) +
                                          " is not");
                }
                continue;
            }
            out.nu[k] = std::conj(lam / mu[k]);
        }
        out.mu = mu;
        out.nu = normalized_or_throw(out.nu, "all coefficients are zero");
    }
    check_design(decomp, out);
    return out;
}

void stator::check_design(const TensorDecomposition &decomp, const ResourceDesign &design) {
    const auto d = static_cast<Eigen::Index>(decomp.resource_dim());
    if (design.mu.size() != d || design.nu.size() != d) {
        throw ValidationError("design length differs from the number of terms");
    }
    if (std::abs(design.mu.norm() - 1.0) > kNormTolerance || std::abs(design.nu.norm() - 1.0) > kNormTolerance) {
        throw ValidationError("mu and nu must be unit vectors");
    }
    Eigen::VectorXcd prod(d), lam(d);
    for (Eigen::Index k = 0; k < d; k++) {
        prod[k] = design.mu[k] * std::conj(design.nu[k]);
        lam[k] = decomp.lambdas[static_cast<std::size_t>(k)];
    }
    // Proportional iff prod equals its projection onto lambda.
    Complex scale = lam.dot(prod) / lam.squaredNorm();
    if ((prod - scale * lam).norm() > 1e-10 || std::abs(scale) < 1e-14) {
        throw ValidationError("mu_k conj(nu_k) is not proportional to lambda_k");
    }
}

Eigen::MatrixXcd stator::leader_basis(const Eigen::VectorXcd &nu) {
    const Eigen::Index d = nu.size();
    Eigen::MatrixXcd basis(d, d);
    basis.col(0) = nu.normalized();
    Eigen::Index filled = 1;
    for (Eigen::Index e = 0; e < d && filled < d; e++) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Unit(d, e);
        for (int pass = 0; pass < 2; pass++) {
            for (Eigen::Index c = 0; c < filled; c++) {
                v -= basis.col(c).dot(v) * basis.col(c);
            }
        }
        if (v.norm() > 1e-10) {
            basis.col(filled++) = v.normalized();
        }
    }
    return basis;
}

Eigen::VectorXcd stator::fourier_vector(std::size_t d, std::size_t s) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; k++) {
        v[static_cast<Eigen::Index>(k)] =
            root_of_unity(d, -static_cast<long long>((s * k) % d)) / std::sqrt(static_cast<double>(d));
    }
    return v;
}

GeneralRun stator::run_general_protocol(
    const TensorDecomposition &decomp, const ResourceDesign &design, const StateVector &system,
    OutcomeSource &outcomes) {
    decomp.validate();
    check_design(decomp, design);
    if (system.dims() != decomp.system_dims()) {
        throw DimensionError("system dims do not match the decomposition");
    }
    const std::size_t n = decomp.parties();
    const std::size_t d = decomp.resource_dim();
    Joint j = couple(decomp, design, system.amps());

    GeneralRun run{system, {}, 0, false, 1.0};
    std::size_t sum = 0;
    auto step = [&](const std::vector<Eigen::VectorXcd> &basis) {
        std::vector<Eigen::VectorXcd> branches;
        std::vector<double> probs;
        const double total = j.amps.squaredNorm();
        for (const auto &b : basis) {
            branches.push_back(detail::contract_subsystem(j.amps, j.dims, 0, b));
            probs.push_back(branches.back().squaredNorm() / total);
        }
        std::size_t pick = outcomes.choose(probs);
        if (!(probs[pick] > kZeroProbability)) {
            throw ZeroProbabilityError("forced outcome has zero probability");
        }
        run.probability *= probs[pick];
        j.amps = branches[pick] / branches[pick].norm();
        j.dims = detail::remove_party(j.dims, 0);
        return pick;
    };

    std::vector<Eigen::VectorXcd> fourier;
    for (std::size_t s = 0; s < d; s++) {
        fourier.push_back(fourier_vector(d, s));
    }
    for (std::size_t w = 0; w + 1 < n; w++) {
        std::size_t s = step(fourier);
        run.worker_outcomes.push_back(s);
        sum = (sum + s) % d;
    }
    correct(j, d, sum);
    Eigen::MatrixXcd lb = leader_basis(design.nu);
    std::vector<Eigen::VectorXcd> leader;
    for (Eigen::Index c = 0; c < lb.cols(); c++) {
        leader.push_back(lb.col(c));
    }
    run.leader_outcome = step(leader);
    run.success = run.leader_outcome == 0;
    run.state = StateVector(j.dims, j.amps);
    return run;
}

OperatorMatrix stator::general_branch_operator(
    const TensorDecomposition &decomp, const ResourceDesign &design, std::span<const std::size_t> worker_outcomes,
    std::size_t leader_outcome) {
    decomp.validate();
    check_design(decomp, design);
    require_pattern(decomp, worker_outcomes, leader_outcome);
    const std::size_t d = decomp.resource_dim();
    const Dims sys = decomp.system_dims();
    const std::size_t dim = joint_dimension(sys);
    const Eigen::MatrixXcd lb = leader_basis(design.nu);
    std::size_t sum = 0;
    for (std::size_t s : worker_outcomes) {
        sum = (sum + s) % d;
    }
    Eigen::MatrixXcd k(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; i++) {
        Joint j = couple(decomp, design, Eigen::VectorXcd::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(i)));
        for (std::size_t s : worker_outcomes) {
            measure_front(j, fourier_vector(d, s));
        }
        correct(j, d, sum);
        measure_front(j, lb.col(static_cast<Eigen::Index>(leader_outcome)));
        k.col(static_cast<Eigen::Index>(i)) = j.amps;
    }
    return OperatorMatrix(sys, std::move(k));
}

OperatorMatrix stator::analytic_branch_operator(
    const TensorDecomposition &decomp, const ResourceDesign &design, std::size_t leader_outcome) {
    decomp.validate();
    check_design(decomp, design);
    const std::size_t d = decomp.resource_dim();
    if (leader_outcome >= d) {
        throw ValidationError("leader outcome out of range");
    }
    const Eigen::MatrixXcd lb = leader_basis(design.nu);
    Dims sys = decomp.system_dims();
    auto n = static_cast<Eigen::Index>(joint_dimension(sys));
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t t = 0; t < d; t++) {
        auto ti = static_cast<Eigen::Index>(t);
        k += design.mu[ti] * std::conj(lb(ti, static_cast<Eigen::Index>(leader_outcome))) *
             term_product(decomp.unitaries[t]);
    }
    return OperatorMatrix(std::move(sys), std::move(k));
}

double stator::average_success_probability(const TensorDecomposition &decomp, const ResourceDesign &design) {
    OperatorMatrix k = analytic_branch_operator(decomp, design, 0);
    return k.entries().squaredNorm() / static_cast<double>(k.dimension());
}

double stator::design_entanglement(const ResourceDesign &design) {
    double h = 0.0;
    for (Eigen::Index k = 0; k < design.mu.size(); k++) {
        double p = std::norm(design.mu[k]);
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

TensorDecomposition stator::iterate_residual(const TensorDecomposition &decomp, const ResourceDesign &design) {
    decomp.validate();
    check_design(decomp, design);
    if (decomp.resource_dim() != 2) {
        throw ValidationError("iteration is only defined for two-term decompositions");
    }
    const Eigen::MatrixXcd v = term_product(decomp.unitaries[1]);
    if ((v * v - Eigen::MatrixXcd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff() > kDecompositionTolerance) {
        throw ValidationError("iteration needs V^2 = I");
    }
    const Eigen::MatrixXcd lb = leader_basis(design.nu);
    const Complex c0 = design.mu[0] * std::conj(lb(0, 1));
    const Complex c1 = design.mu[1] * std::conj(lb(1, 1));
    const Complex l0 = decomp.lambdas[0], l1 = decomp.lambdas[1];
    // (l0 + l1 V)(c0 + c1 V)^dagger with V hermitian and V^2 = I.
    Complex n0 = l0 * std::conj(c0) + l1 * std::conj(c1);
    Complex n1 = l0 * std::conj(c1) + l1 * std::conj(c0);
    double norm = std::sqrt(std::norm(n0) + std::norm(n1));
    if (!(norm > 0.0)) {
        throw ZeroProbabilityError("failure branch has zero probability");
    }
    TensorDecomposition next{{n0 / norm, n1 / norm}, decomp.unitaries};
    if (!next.assemble().is_unitary(kDecompositionTolerance)) {
        throw ValidationError("failure residual is not proportional to a unitary");
    }
    return next;
}

FailureCostReport stator::failure_policy_cost(
    const TensorDecomposition &decomp, const ResourceDesign &design, FailurePolicy policy, std::size_t max_rounds) {
    decomp.validate();
    check_design(decomp, design);
    FailureCostReport r;
    r.policy = policy;
    r.success_probability = std::min(1.0, average_success_probability(decomp, design));
    r.failure_probability = std::max(0.0, 1.0 - r.success_probability);
    if (r.failure_probability < 1e-14) {
        r.failure_probability = 0.0;
    }
    r.first_round_ebits = design_entanglement(design);

    double teleport_ebits = 0.0;
    const Dims sys = decomp.system_dims();
    for (std::size_t j = 0; j + 1 < sys.size(); j++) {
        teleport_ebits += 2.0 * std::log2(static_cast<double>(sys[j]));
    }

    if (policy == FailurePolicy::kTeleport) {
        r.fallback_ebits = teleport_ebits;
        r.fallback_bits = 2.0 * teleport_ebits;
        r.expected_ebits = r.first_round_ebits + r.failure_probability * teleport_ebits;
        r.rounds.push_back({r.success_probability, r.first_round_ebits});
        return r;
    }

    // Terms with lambda_k = 0 carry mu_k = 0 too and drop out.
    TensorDecomposition current;
    std::vector<Eigen::Index> kept;
    for (std::size_t k = 0; k < decomp.resource_dim(); k++) {
        if (k == 0 || std::abs(decomp.lambdas[k]) > 1e-14 ||
            std::abs(design.mu[static_cast<Eigen::Index>(k)]) > 1e-14) {
            current.lambdas.push_back(decomp.lambdas[k]);
            current.unitaries.push_back(decomp.unitaries[k]);
            kept.push_back(static_cast<Eigen::Index>(k));
        }
    }
    if (current.resource_dim() == 1) {
        r.expected_ebits = r.first_round_ebits;
        r.rounds.push_back({r.success_probability, r.first_round_ebits});
        return r;
    }
    if (current.resource_dim() != 2) {
        throw ValidationError("iterate policy needs a two-term decomposition");
    }
    ResourceDesign current_design{Eigen::VectorXcd(2), Eigen::VectorXcd(2)};
    for (Eigen::Index k = 0; k < 2; k++) {
        current_design.mu[k] = design.mu[kept[static_cast<std::size_t>(k)]];
        current_design.nu[k] = design.nu[kept[static_cast<std::size_t>(k)]];
    }
    current_design.mu.normalize();
    current_design.nu.normalize();
    double reach = 1.0;
    double expected = 0.0;
    for (std::size_t round = 0; round < max_rounds; round++) {
        double ps = std::min(1.0, average_success_probability(current, current_design));
        double e = design_entanglement(current_design);
        r.rounds.push_back({ps, e});
        expected += reach * e;
        reach *= std::max(0.0, 1.0 - ps);
        if (reach < 1e-15) {
            reach = 0.0;
            break;
        }
        current = iterate_residual(current, current_design);
        if (round == 0) {
            r.next = current;
        }
        current_design = design_resource(current, DesignPolicy::kSqrt);
    }
    expected += reach * teleport_ebits;
    r.expected_ebits = expected;
    r.fallback_ebits =
        r.failure_probability > 0.0 ? (expected - r.first_round_ebits) / r.failure_probability : 0.0;
    r.fallback_bits = reach > 0.0 ? 2.0 * teleport_ebits : 0.0;
    return r;
}

std::vector<FailureRow> stator::failure_vanishing_check(
    const std::function<TensorDecomposition(double)> &family, std::span<const double> s_values) {
    std::vector<FailureRow> rows;
    for (double s : s_values) {
        TensorDecomposition decomp = family(s);
        ResourceDesign design = design_resource(decomp, DesignPolicy::kSqrt);
        double pf = 1.0 - average_success_probability(decomp, design);
        rows.push_back({s, std::abs(pf) < 1e-14 ? 0.0 : pf});
    }
    return rows;
}

PatternCheck stator::check_all_patterns(const TensorDecomposition &decomp, const ResourceDesign &design) {
    decomp.validate();
    check_design(decomp, design);
    const std::size_t n = decomp.parties();
    const std::size_t d = decomp.resource_dim();
    const OperatorMatrix u = decomp.assemble();
    PatternCheck out;
    std::vector<std::size_t> pattern(n - 1, 0);
    while (true) {
        OperatorMatrix k = general_branch_operator(decomp, design, pattern, 0);
        double weight = k.entries().squaredNorm();
        out.success_probability += weight / static_cast<double>(k.dimension());
        if (weight > kZeroProbability) {
            Eigen::MatrixXcd scaled = k.entries() * std::sqrt(static_cast<double>(k.dimension()) / weight);
            out.max_distance = std::max(out.max_distance, op_distance_phase_invariant(scaled, u.entries()));
        }
        out.patterns++;
        std::size_t pos = 0;
        while (pos < pattern.size() && ++pattern[pos] == d) {
            pattern[pos++] = 0;
        }
        if (pos == pattern.size()) {
            break;
        }
    }
    return out;
}
