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

#include "stator/stage_protocol.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "stator/entropy.hpp"
#include "stator/error.hpp"

using namespace stator;

namespace {

constexpr double kPi = std::numbers::pi;

using Chooser = std::function<std::size_t(std::span<const double>)>;

void require_qubit_parties(const Dims &dims) {
    if (dims.size() < 2) {
        throw ValidationError("the stage protocol needs at least two parties");
    }
    for (std::size_t d : dims) {
        if (d != 2) {
            throw ValidationError("the stage protocol acts on one qubit per party");
        }
    }
}

Eigen::Vector2cd basis2(int b) {
    Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
    v[b] = 1.0;
    return v;
}

void apply_one(Eigen::VectorXcd &amps, const Dims &dims, std::size_t target, const Eigen::MatrixXcd &op) {
    detail::apply_to_subsystems(amps, dims, std::span<const std::size_t>(&target, 1), op);
}

struct AfterCorrection {
    Eigen::VectorXcd amps;  // over (R_N, S_1..S_N), unnormalized
    std::vector<int> worker_bits;
    double probability = 1.0;
};

/// Steps 1-3. Joint ordering: R_1..R_N, S_1..S_N.
AfterCorrection steps_one_to_three(const Eigen::VectorXcd &system, std::size_t n, double beta, const Chooser &choose) {
    Eigen::VectorXcd resource = resource_state(beta, n).amps();
    Eigen::VectorXcd amps(resource.size() * system.size());
    for (Eigen::Index i = 0; i < resource.size(); i++) {
        amps.segment(i * system.size(), system.size()) = resource[i] * system;
    }
    Dims dims(2 * n, 2);

    // Step 1: controlled-Z between each party's resource qubit and system qubit.
    Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
    cz(3, 3) = -1.0;
    for (std::size_t j = 0; j < n; j++) {
        std::array<std::size_t, 2> targets{j, n + j};
        detail::apply_to_subsystems(amps, dims, targets, cz);
    }

    // Step 2: each worker applies a Hadamard and measures; its register is always first.
    AfterCorrection out;
    double norm2 = amps.squaredNorm();
    for (std::size_t w = 0; w + 1 < n; w++) {
        apply_one(amps, dims, 0, gates::hadamard());
        std::array<Eigen::VectorXcd, 2> branches{
            detail::contract_subsystem(amps, dims, 0, basis2(0)),
            detail::contract_subsystem(amps, dims, 0, basis2(1)),
        };
        std::array<double, 2> probs{branches[0].squaredNorm() / norm2, branches[1].squaredNorm() / norm2};
        std::size_t b = choose(probs);
        out.worker_bits.push_back(static_cast<int>(b));
        out.probability *= probs[b];
        amps = std::move(branches[b]);
        norm2 = amps.squaredNorm();
        dims = detail::remove_party(dims, 0);
    }

    // Step 3: the leader fixes the sign on odd parity.
    int parity = 0;
    for (int b : out.worker_bits) {
        parity ^= b;
    }
    if (parity) {
        apply_one(amps, dims, 0, gates::pauli_z());
    }
    out.amps = std::move(amps);
    return out;
}

struct StageRun {
    Eigen::VectorXcd system;  // unnormalized
    StageOutcome outcome;
};

StageRun simulate_stage(const Eigen::VectorXcd &system, std::size_t n, const StageParams &params, const Chooser &choose) {
    StageRun run;
    run.outcome.kind = params.kind;
    if (params.kind == StageKind::kLocal) {
        run.system = system;
        Dims dims(n, 2);
        for (std::size_t j = 0; j < n; j++) {
            apply_one(run.system, dims, j, gates::pauli_z());
        }
        return run;
    }

    AfterCorrection corrected = steps_one_to_three(system, n, params.beta, choose);
    Dims dims(n + 1, 2);

    // Step 4: project the leader's resource qubit.
    Eigen::Vector2cd success(std::cos(params.gamma), std::sin(params.gamma));
    Eigen::Vector2cd failure(std::sin(params.gamma), -std::cos(params.gamma));
    double norm2 = corrected.amps.squaredNorm();
    std::array<Eigen::VectorXcd, 2> branches{
        detail::contract_subsystem(corrected.amps, dims, 0, success),
        detail::contract_subsystem(corrected.amps, dims, 0, failure),
    };
    std::array<double, 2> probs{branches[0].squaredNorm() / norm2, branches[1].squaredNorm() / norm2};
    std::size_t b = choose(probs);
    run.system = std::move(branches[b]);
    run.outcome.branch = static_cast<Branch>(b);
    run.outcome.worker_bits = std::move(corrected.worker_bits);
    run.outcome.probability = corrected.probability * probs[b];

    if (params.kind == StageKind::kDeterministic && run.outcome.branch == Branch::kFailure) {
        Dims sys_dims(n, 2);
        for (std::size_t j = 0; j < n; j++) {
            apply_one(run.system, sys_dims, j, gates::pauli_z());
        }
    }
    return run;
}

Chooser chooser_for(OutcomeSource &outcomes) {
    return [&outcomes](std::span<const double> probs) {
        return outcomes.choose(probs);
    };
}

double stage_ebits(const StageParams &params) {
    switch (params.kind) {
        case StageKind::kProbabilistic:
            return resource_entanglement(params.beta);
        case StageKind::kDeterministic:
            return 1.0;
        case StageKind::kLocal:
            return 0.0;
    }
    return 0.0;
}

bool is_terminal_kind(StageKind kind) {
    return kind == StageKind::kDeterministic || kind == StageKind::kLocal;
}

}  // namespace

double stator::fold_angle(double x) {
    if (!std::isfinite(x)) {
        throw ValidationError("angle must be finite");
    }
    double r = std::remainder(x, kPi);
    if (r <= -kPi / 2) {
        r += kPi;
    }
    return r;
}

double stator::reduce_angle(double x) {
    double r = std::abs(fold_angle(x));
    return r <= kPi / 4 ? r : kPi / 2 - r;
}

bool stator::angles_equivalent(double a, double b, double tol) {
    return std::abs(std::remainder(a - b, kPi)) <= tol;
}

double stator::gamma_for(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw ValidationError("gamma_for: angles must be finite");
    }
    if (alpha == 0.0) {
        return 0.0;
    }
    double tb = std::tan(beta);
    if (std::abs(std::sin(beta)) < 1e-300 || std::abs(std::cos(beta)) < 1e-15) {
        throw ValidationError("gamma_for: beta = 0 or pi/2 cannot implement a nonzero rotation");
    }
    return std::atan(std::tan(alpha) / tb);
}

StageParams stator::probabilistic_stage(double alpha, double beta, std::size_t stage_index) {
    StageParams p;
    p.alpha = fold_angle(alpha);
    p.beta = beta;
    p.gamma = gamma_for(p.alpha, beta);
    p.stage_index = stage_index;
    p.kind = StageKind::kProbabilistic;
    return p;
}

StageParams stator::deterministic_stage(double alpha, std::size_t stage_index) {
    StageParams p;
    p.alpha = fold_angle(alpha);
    p.beta = kPi / 4;
    p.gamma = p.alpha;
    p.stage_index = stage_index;
    p.kind = StageKind::kDeterministic;
    return p;
}

StageParams stator::local_stage(std::size_t stage_index) {
    StageParams p;
    p.alpha = kPi / 2;
    p.beta = 0.0;
    p.gamma = 0.0;
    p.stage_index = stage_index;
    p.kind = StageKind::kLocal;
    return p;
}

double stator::success_probability(const StageParams &params) {
    if (params.kind == StageKind::kLocal) {
        return 1.0;
    }
    double cb = std::cos(params.beta), sb = std::sin(params.beta);
    double cg = std::cos(params.gamma), sg = std::sin(params.gamma);
    return cb * cb * cg * cg + sb * sb * sg * sg;
}

FailureResidual stator::failure_residual(const StageParams &params) {
    // Failure operator: cos(b)sin(g) I - i sin(b)cos(g) Z^{(x)N}.
    double re = std::cos(params.beta) * std::sin(params.gamma);
    double im = -std::sin(params.beta) * std::cos(params.gamma);
    double alpha_prime = fold_angle(std::atan2(im, re));
    return {alpha_prime, fold_angle(params.alpha - alpha_prime)};
}

double stator::success_rotation(const StageParams &params) {
    double re = std::cos(params.beta) * std::cos(params.gamma);
    double im = std::sin(params.beta) * std::sin(params.gamma);
    return fold_angle(std::atan2(im, re));
}

void stator::check_stage_relation(const StageParams &params) {
    if (params.kind == StageKind::kLocal) {
        return;
    }
    if (params.kind == StageKind::kDeterministic) {
        if (std::abs(params.beta - kPi / 4) > 1e-12 || !angles_equivalent(params.gamma, params.alpha, 1e-12)) {
            throw ValidationError("deterministic stage must use beta = pi/4 and gamma = alpha");
        }
        return;
    }
    // Compare the rotation the success branch performs with alpha; this is the
    // tangent relation without its blow-up at alpha = pi/2.
    double lhs = std::tan(params.beta) * std::tan(params.gamma);
    double rhs = std::tan(params.alpha);
    bool ok = std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)) ||
              angles_equivalent(success_rotation(params), params.alpha, 1e-10);
    if (!ok) {
        throw ValidationError(
            "stage " + std::to_string(params.stage_index) + " violates tan(beta) tan(gamma) = tan(alpha)");
    }
}

const StageParams &StageSchedule::terminal() const {
    if (stages.empty()) {
        throw ValidationError("empty schedule has no terminal stage");
    }
    return stages.back();
}

void StageSchedule::validate() const {
    if (!std::isfinite(alpha)) {
        throw ValidationError("schedule alpha must be finite");
    }
    if (stages.empty()) {
        if (!angles_equivalent(alpha, 0.0, 1e-15)) {
            throw ValidationError("only a trivial rotation may have an empty schedule");
        }
        return;
    }
    if (stages.size() > max_stages) {
        throw ValidationError("schedule has more stages than max_stages");
    }
    if (!angles_equivalent(stages.front().alpha, alpha, 1e-12)) {
        throw ValidationError("first stage does not target the schedule angle");
    }
    for (std::size_t l = 0; l < stages.size(); l++) {
        const auto &s = stages[l];
        if (s.stage_index != l + 1) {
            throw ValidationError("stage indices must run 1, 2, ...");
        }
        bool last = l + 1 == stages.size();
        if (is_terminal_kind(s.kind) != last) {
            throw ValidationError("exactly the last stage must be deterministic or local");
        }
        if (s.kind == StageKind::kLocal && !angles_equivalent(s.alpha, kPi / 2, 1e-12)) {
            throw ValidationError("a local stage can only implement U(pi/2)");
        }
        check_stage_relation(s);
        if (!last) {
            double next = failure_residual(s).alpha_next;
            if (!angles_equivalent(stages[l + 1].alpha, next, 1e-9)) {
                throw ValidationError(
                    "stage " + std::to_string(l + 2) + " does not target the residual of stage " + std::to_string(l + 1));
            }
        }
    }
}

StageSchedule stator::deterministic_schedule(double alpha) {
    StageSchedule s;
    s.alpha = fold_angle(alpha);
    if (angles_equivalent(s.alpha, 0.0, 1e-15)) {
        return s;
    }
    if (angles_equivalent(s.alpha, kPi / 2, 1e-15)) {
        s.stages.push_back(local_stage(1));
        return s;
    }
    s.stages.push_back(deterministic_stage(s.alpha, 1));
    return s;
}

StageSchedule stator::cdkl_schedule(double alpha, std::size_t max_stages) {
    if (max_stages == 0) {
        throw ValidationError("max_stages must be positive");
    }
    StageSchedule s;
    s.alpha = fold_angle(alpha);
    s.max_stages = max_stages;
    if (angles_equivalent(s.alpha, 0.0, 1e-15)) {
        return s;
    }
    if (angles_equivalent(s.alpha, kPi / 2, 1e-15)) {
        s.stages.push_back(local_stage(1));
        return s;
    }
    double a = s.alpha;
    for (std::size_t l = 1;; l++) {
        if (angles_equivalent(a, kPi / 2, 1e-15)) {
            s.stages.push_back(local_stage(l));
            break;
        }
        if (l == max_stages || std::abs(std::abs(a) - kPi / 4) <= 1e-12) {
            s.stages.push_back(deterministic_stage(a, l));
            break;
        }
        StageParams p = probabilistic_stage(a, std::abs(a), l);
        s.stages.push_back(p);
        a = failure_residual(p).alpha_next;
    }
    return s;
}

StageSchedule stator::schedule_from_betas(double alpha, std::span<const double> betas, std::size_t max_stages) {
    StageSchedule s;
    s.alpha = fold_angle(alpha);
    s.max_stages = max_stages;
    if (betas.size() + 1 > max_stages) {
        throw ValidationError("too many betas for max_stages");
    }
    if (angles_equivalent(s.alpha, 0.0, 1e-15)) {
        return s;
    }
    double a = s.alpha;
    std::size_t l = 1;
    for (double beta : betas) {
        if (angles_equivalent(a, 0.0, 1e-15) || angles_equivalent(a, kPi / 2, 1e-15)) {
            break;
        }
        StageParams p = probabilistic_stage(a, beta, l++);
        s.stages.push_back(p);
        a = failure_residual(p).alpha_next;
    }
    if (angles_equivalent(a, kPi / 2, 1e-15)) {
        s.stages.push_back(local_stage(l));
    } else {
        s.stages.push_back(deterministic_stage(a, l));
    }
    return s;
}

StageResult stator::run_stage(const StateVector &system, const StageParams &params, OutcomeSource &outcomes) {
    require_qubit_parties(system.dims());
    check_stage_relation(params);
    StageRun run = simulate_stage(system.amps(), system.parties(), params, chooser_for(outcomes));
    return StageResult{StateVector::normalized(system.dims(), std::move(run.system)), std::move(run.outcome)};
}

StageResult stator::run_deterministic_stage(const StateVector &system, double alpha, OutcomeSource &outcomes) {
    return run_stage(system, deterministic_stage(alpha, 1), outcomes);
}

StateVector stator::stage_after_correction(const StateVector &system, double beta, std::span<const int> worker_bits) {
    require_qubit_parties(system.dims());
    std::size_t n = system.parties();
    if (worker_bits.size() + 1 != n) {
        throw ValidationError("need one step-two result per worker");
    }
    std::size_t cursor = 0;
    Chooser forced = [&](std::span<const double> probs) {
        std::size_t b = static_cast<std::size_t>(worker_bits[cursor++]);
        if (b > 1 || !(probs[b] > kZeroProbability)) {
            throw ZeroProbabilityError("forced worker result impossible");
        }
        return b;
    };
    AfterCorrection corrected = steps_one_to_three(system.amps(), n, beta, forced);
    return StateVector::normalized(Dims(n + 1, 2), std::move(corrected.amps));
}

OperatorMatrix stator::stage_branch_operator(
    std::size_t parties, const StageParams &params, std::span<const int> worker_bits, Branch branch) {
    Dims dims(parties, 2);
    require_qubit_parties(dims);
    if (params.kind != StageKind::kLocal && worker_bits.size() + 1 != parties) {
        throw ValidationError("need one step-two result per worker");
    }
    const std::size_t d = joint_dimension(dims);
    Eigen::MatrixXcd k(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; i++) {
        std::size_t cursor = 0;
        Chooser forced = [&](std::span<const double>) -> std::size_t {
            if (cursor < worker_bits.size()) {
                return static_cast<std::size_t>(worker_bits[cursor++]);
            }
            return static_cast<std::size_t>(branch);
        };
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
        e[static_cast<Eigen::Index>(i)] = 1.0;
        StageRun run = simulate_stage(e, parties, params, forced);
        k.col(static_cast<Eigen::Index>(i)) = run.system;
    }
    double scale = k.squaredNorm() / static_cast<double>(d);
    if (!(scale > kZeroProbability)) {
        throw ZeroProbabilityError("stage branch has zero probability");
    }
    k /= std::sqrt(scale);
    return OperatorMatrix(std::move(dims), std::move(k));
}

Transcript stator::run_protocol(
    double alpha, const StageSchedule &schedule, const StateVector &system, OutcomeSource &outcomes) {
    schedule.validate();
    if (!angles_equivalent(alpha, schedule.alpha, 1e-12)) {
        throw ValidationError("schedule was built for a different angle");
    }
    require_qubit_parties(system.dims());
    const std::size_t n = system.parties();

    std::vector<StageOutcome> path;
    double ebits = 0.0;
    std::vector<std::size_t> worker_bits(n - 1, 0);
    std::size_t leader_bits = 0;
    double probability = 1.0;
    OperatorMatrix net = OperatorMatrix::identity(system.dims());
    Eigen::VectorXcd amps = system.amps();

    for (const auto &params : schedule.stages) {
        StageRun run = simulate_stage(amps, n, params, chooser_for(outcomes));
        double norm = run.system.norm();
        if (!(norm * norm > kZeroProbability)) {
            throw ZeroProbabilityError("protocol reached a zero-probability branch");
        }
        amps = run.system / norm;
        ebits += stage_ebits(params);
        if (params.kind != StageKind::kLocal) {
            for (auto &b : worker_bits) {
                b += 1;
            }
            leader_bits += 1;
        }
        probability *= run.outcome.probability;
        net = stage_branch_operator(n, params, run.outcome.worker_bits, run.outcome.branch) * net;
        bool done = params.kind != StageKind::kProbabilistic || run.outcome.branch == Branch::kSuccess;
        path.push_back(std::move(run.outcome));
        if (done) {
            break;
        }
    }
    return Transcript{
        std::move(path),
        ebits,
        std::move(worker_bits),
        leader_bits,
        std::move(net),
        StateVector(system.dims(), std::move(amps)),
        probability,
    };
}

LeafSummary stator::enumerate_protocol_leaves(
    const StageSchedule &schedule, std::size_t parties, const std::function<void(const ProtocolLeaf &)> &visit) {
    schedule.validate();
    Dims dims(parties, 2);
    require_qubit_parties(dims);
    const OperatorMatrix target = gates::collective_z_rotation(schedule.alpha, parties);
    const std::size_t patterns = std::size_t{1} << (parties - 1);

    // ops[l][pattern * 2 + branch]
    std::vector<std::vector<std::optional<OperatorMatrix>>> ops(schedule.stages.size());
    std::vector<std::array<double, 2>> branch_probs(schedule.stages.size());
    auto bits_of = [&](std::size_t pattern) {
        std::vector<int> bits(parties - 1);
        for (std::size_t w = 0; w + 1 < parties; w++) {
            bits[w] = static_cast<int>((pattern >> (parties - 2 - w)) & 1);
        }
        return bits;
    };
    for (std::size_t l = 0; l < schedule.stages.size(); l++) {
        const auto &params = schedule.stages[l];
        double ps = success_probability(params);
        branch_probs[l] = {ps, 1.0 - ps};
        if (params.kind == StageKind::kLocal) {
            ops[l].emplace_back(stage_branch_operator(parties, params, {}, Branch::kSuccess));
            continue;
        }
        ops[l].resize(2 * patterns);
        for (std::size_t p = 0; p < patterns; p++) {
            auto bits = bits_of(p);
            for (int b = 0; b < 2; b++) {
                if (branch_probs[l][b] > kZeroProbability) {
                    ops[l][2 * p + b] = stage_branch_operator(parties, params, bits, static_cast<Branch>(b));
                }
            }
        }
    }

    LeafSummary summary;
    std::vector<StageOutcome> path;
    auto emit = [&](const OperatorMatrix &net, double probability, double ebits) {
        ProtocolLeaf leaf;
        leaf.path = path;
        leaf.probability = probability;
        leaf.ebits = ebits;
        leaf.net_operator = &net;
        leaf.distance = op_distance_phase_invariant(net, target);
        summary.leaves += 1;
        summary.max_distance = std::max(summary.max_distance, leaf.distance);
        summary.total_probability += probability;
        summary.expected_ebits += probability * ebits;
        std::size_t leader = 0;
        for (const auto &o : path) {
            leader += o.kind == StageKind::kLocal ? 0 : 1;
        }
        summary.expected_leader_bits += probability * static_cast<double>(leader);
        if (visit) {
            visit(leaf);
        }
    };

    if (schedule.stages.empty()) {
        emit(OperatorMatrix::identity(dims), 1.0, 0.0);
        return summary;
    }

    std::function<void(std::size_t, const OperatorMatrix &, double, double)> dfs =
        [&](std::size_t l, const OperatorMatrix &acc, double probability, double ebits) {
            const auto &params = schedule.stages[l];
            double e = ebits + stage_ebits(params);
            if (params.kind == StageKind::kLocal) {
                path.push_back(StageOutcome{StageKind::kLocal, Branch::kSuccess, {}, 1.0});
                emit(*ops[l][0] * acc, probability, e);
                path.pop_back();
                return;
            }
            const double worker_p = 1.0 / static_cast<double>(patterns);
            for (std::size_t p = 0; p < patterns; p++) {
                for (int b = 0; b < 2; b++) {
                    if (!ops[l][2 * p + b]) {
                        continue;
                    }
                    double prob = probability * worker_p * branch_probs[l][b];
                    OperatorMatrix next = *ops[l][2 * p + b] * acc;
                    path.push_back(StageOutcome{params.kind, static_cast<Branch>(b), bits_of(p), worker_p * branch_probs[l][b]});
                    bool done = params.kind != StageKind::kProbabilistic || b == 0;
                    if (done) {
                        emit(next, prob, e);
                    } else {
                        dfs(l + 1, next, prob, e);
                    }
                    path.pop_back();
                }
            }
        };
    dfs(0, OperatorMatrix::identity(dims), 1.0, 0.0);
    return summary;
}
