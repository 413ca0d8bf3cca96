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

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "stator/error.hpp"
#include "stator/ham_compiler.hpp"

using namespace stator;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

HamiltonianSpec single(std::vector<Eigen::MatrixXcd> factors, double t, std::size_t slices = 1) {
    HamiltonianSpec s;
    s.terms.push_back({std::move(factors)});
    s.time = t;
    s.slices = slices;
    return s;
}

Eigen::MatrixXcd target(const HamiltonianSpec &spec) {
    Eigen::MatrixXcd h;
    for (const auto &term : spec.terms) {
        Eigen::MatrixXcd k = oracle::kron_all(term.factors);
        h = h.size() ? Eigen::MatrixXcd(h + k) : k;
    }
    return oracle::expm_hermitian(h, spec.signed_time());
}

Eigen::MatrixXcd diag2(double a, double b) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("diagonalize examples", "[compiler]") {
    DiagonalizedForm z = diagonalize(TensorProductTerm{{oracle::pauli(3), oracle::pauli(3)}});
    CHECK((z.locals[0] - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
    CHECK(z.diagonals[0] == std::vector<double>{1.0, -1.0});
    CHECK(z.delta == 1.0);

    DiagonalizedForm x = diagonalize(TensorProductTerm{{oracle::pauli(1), oracle::pauli(3)}});
    Eigen::MatrixXcd h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    CHECK((x.locals[0] - h).norm() < 1e-12);

    DiagonalizedForm d = diagonalize(TensorProductTerm{{diag2(2, 1), oracle::pauli(3)}});
    CHECK_THAT(d.diagonals[0][0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(d.diagonals[0][1], WithinAbs(0.5, 1e-15));
    CHECK_THAT(d.factor_norms[0], WithinAbs(2.0, 1e-15));
    CHECK_THAT(d.delta, WithinAbs(2.0, 1e-15));
}

TEST_CASE("diagonalize reconstructs each factor", "[compiler][property]") {
    std::mt19937_64 g(21);
    for (int trial = 0; trial < 30; trial++) {
        std::vector<Eigen::MatrixXcd> f;
        for (std::size_t d : {2, 3, 4}) {
            f.push_back(oracle::random_hermitian(d, g));
        }
        DiagonalizedForm form = diagonalize(TensorProductTerm{f});
        double delta = 1.0;
        for (std::size_t j = 0; j < f.size(); j++) {
            const auto &a = form.diagonals[j];
            Eigen::VectorXcd diag(static_cast<Eigen::Index>(a.size()));
            double maxabs = 0.0;
            for (std::size_t l = 0; l < a.size(); l++) {
                diag[static_cast<Eigen::Index>(l)] = a[l];
                maxabs = std::max(maxabs, std::abs(a[l]));
                CHECK(a[l] <= 1.0 + 1e-15);
                CHECK(a[l] >= -1.0 - 1e-15);
                if (l) {
                    CHECK(a[l] <= a[l - 1]);
                }
            }
            CHECK_THAT(maxabs, WithinAbs(1.0, 1e-14));
            Eigen::MatrixXcd rebuilt = form.factor_norms[j] * form.locals[j] * diag.asDiagonal() * form.locals[j].adjoint();
            CHECK((rebuilt - f[j]).cwiseAbs().maxCoeff() < 1e-9);
            CHECK_THAT(form.factor_norms[j], WithinRel(f[j].operatorNorm(), 1e-10));
            delta *= form.factor_norms[j];
        }
        CHECK_THAT(form.delta, WithinRel(delta, 1e-13));
    }
}

TEST_CASE("factor step examples", "[compiler]") {
    DiagonalizedForm pm = diagonalize(TensorProductTerm{{oracle::pauli(3), oracle::pauli(3)}});
    auto step = compile_factor_step(0, pm, 0.3);
    REQUIRE(step.size() == 1);  // a = +-1: no interior events
    CHECK(std::get<ZZRotation>(step[0]).angle == 0.3);
    CHECK(compile_factor_step(0, pm, 0.0).empty());

    DiagonalizedForm half = diagonalize(TensorProductTerm{{diag2(1, 0), oracle::pauli(3)}});
    auto events = compile_factor_step(0, half, 1.0);
    // rotation(0.5), swap at p = 1/2, rotation(0.5), undo swap
    REQUIRE(events.size() == 4);
    CHECK_THAT(std::get<ZZRotation>(events[0]).angle, WithinAbs(0.5, 1e-15));
    CHECK(std::get<LocalLayer>(events[1]).kind == LayerKind::kSwap);
    CHECK_THAT(std::get<ZZRotation>(events[2]).angle, WithinAbs(0.5, 1e-15));
    CHECK(std::get<LocalLayer>(events[3]).kind == LayerKind::kSwap);
}

TEST_CASE("compile examples against the oracle", "[compiler]") {
    Eigen::MatrixXcd x = oracle::pauli(1), z = oracle::pauli(3);
    HamiltonianSpec zz = single({z, z}, 0.7);
    CompiledSchedule s = compile(zz);
    CHECK(rotation_count(s) == 1);
    CHECK(s.no_interior_events);
    CHECK(op_distance_phase_invariant(evaluate(s).restricted.entries(), target(zz)) < 1e-12);

    HamiltonianSpec xx = single({x, x}, 0.5);
    CompiledSchedule sx = compile(xx);
    CHECK(sx.no_interior_events);
    CHECK(op_distance_phase_invariant(evaluate(sx).restricted.entries(), target(xx)) < 1e-12);

    HamiltonianSpec zd = single({z, diag2(1, 0)}, 1.0);
    CompiledSchedule sd = compile(zd);
    CHECK_FALSE(sd.no_interior_events);
    CompileVerification v = verify_schedule(sd, zd);
    CHECK(v.operator_distance < 1e-12);
    CHECK(v.leakage < 1e-12);
    CHECK(op_distance_phase_invariant(evaluate(sd).restricted.entries(), target(zd)) < 1e-12);
}

TEST_CASE("single-term compilation is exact for every slice count", "[compiler][property]") {
    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> ut(-2.0, 2.0);
    for (int trial = 0; trial < 12; trial++) {
        std::size_t n = 2 + trial % 2;
        std::vector<Eigen::MatrixXcd> f;
        for (std::size_t j = 0; j < n; j++) {
            f.push_back(oracle::random_hermitian(2 + (trial + j) % 2, g));
        }
        for (std::size_t m : {1, 2, 5}) {
            HamiltonianSpec spec = single(f, ut(g), m);
            spec.convention = trial % 3 == 0 ? TimeConvention::kMinusI : TimeConvention::kPlusI;
            CompiledSchedule s = compile(spec);
            ScheduleEvaluation e = evaluate(s);
            INFO("trial=" << trial << " m=" << m);
            CHECK(op_distance_phase_invariant(e.restricted.entries(), target(spec)) < 1e-9);
            CHECK(e.leakage < 1e-10);
            CHECK_THAT(s.total_angle, WithinRel(std::abs(spec.time) * diagonalize(spec).delta, 1e-12));
            CHECK_THAT(cost_estimate(s, CostMode::kLinear), WithinRel(5.6418 * s.total_angle, 1e-14));
        }
    }
}

TEST_CASE("self-inverse factors need no interior swaps", "[compiler][property]") {
    std::mt19937_64 g(41);
    for (int trial = 0; trial < 10; trial++) {
        std::vector<Eigen::MatrixXcd> f;
        for (std::size_t d : {2, 3}) {
            Eigen::MatrixXcd q = oracle::random_unitary(d, g);
            Eigen::VectorXcd signs(static_cast<Eigen::Index>(d));
            for (Eigen::Index i = 0; i < signs.size(); i++) {
                signs[i] = (i + trial) % 2 ? -1.0 : 1.0;
            }
            f.push_back(1.7 * q * signs.asDiagonal() * q.adjoint());
        }
        HamiltonianSpec spec = single(f, 0.9, 3);
        CompiledSchedule s = compile(spec);
        CHECK(swap_layer_count(s) == 0);
        CHECK(s.no_interior_events);
        CHECK(verify_schedule(s, spec).operator_distance < 1e-9);
    }
}

TEST_CASE("Trotterized sums", "[compiler]") {
    Eigen::MatrixXcd x = oracle::pauli(1), z = oracle::pauli(3), i2 = Eigen::MatrixXcd::Identity(2, 2);

    // Commuting terms: exact already at one slice.
    HamiltonianSpec commuting;
    commuting.terms = {{{z, z, i2}}, {{i2, z, z}}};
    commuting.time = 0.6;
    CHECK(verify_schedule(compile_sum(commuting), commuting).operator_distance < 1e-9);

    // Non-commuting terms: first-order error ~ 1/m.
    HamiltonianSpec mixed;
    mixed.terms = {{{x, x}}, {{z, x}}};
    mixed.time = 0.4;
    std::vector<double> lm, le;
    for (std::size_t m : {8, 16, 32, 64}) {
        mixed.slices = m;
        CompiledSchedule s = compile_sum(mixed);
        CompileVerification v = verify_schedule(s, mixed);
        CHECK(v.leakage < 1e-10);
        lm.push_back(std::log(static_cast<double>(m)));
        le.push_back(std::log(v.operator_distance));
        // Cost additivity: m slices of two unit-norm terms.
        CHECK_THAT(s.total_angle, WithinRel(0.4 * 2.0, 1e-12));
    }
    oracle::Fit fit = oracle::linear_fit(lm, le);
    CHECK(fit.slope > -1.3);
    CHECK(fit.slope < -0.7);

    // One term delegates to compile.
    HamiltonianSpec one = single({x, z}, 0.3, 4);
    CHECK(compile_sum(one).primitives.size() == compile(one).primitives.size());
}

TEST_CASE("linear and exact costs", "[compiler]") {
    HamiltonianSpec zero = single({oracle::pauli(3), oracle::pauli(3)}, 0.0);
    CompiledSchedule s0 = compile(zero);
    CHECK(cost_estimate(s0, CostMode::kLinear) == 0.0);
    CHECK(rotation_count(s0) == 0);

    OptimizerConfig cfg;
    cfg.max_stages = 25;
    EntanglementOptimizer opt(cfg);
    HamiltonianSpec tiny = single({oracle::pauli(1), oracle::pauli(3)}, 5e-5, 1);
    CompiledSchedule s = compile(tiny);
    double linear = cost_estimate(s, CostMode::kLinear);
    double exact = cost_estimate(s, CostMode::kExact, &opt);
    CHECK_THAT(exact, WithinRel(linear, 0.01));
    CHECK_THROWS_AS(cost_estimate(s, CostMode::kExact), ValidationError);
}

TEST_CASE("spec validation names the factor", "[compiler]") {
    Eigen::MatrixXcd bad(2, 2);
    bad << 0, 1, 2, 0;
    HamiltonianSpec s = single({oracle::pauli(3), bad}, 1.0);
    CHECK_THROWS_WITH(s.validate(), Catch::Matchers::ContainsSubstring("factor 1 is not hermitian"));
    HamiltonianSpec big = single({Eigen::MatrixXcd::Identity(5, 5), oracle::pauli(3)}, 1.0);
    CHECK_THROWS_AS(big.validate(), ValidationError);
    HamiltonianSpec mismatch;
    mismatch.terms = {{{oracle::pauli(3), oracle::pauli(3)}}, {{oracle::pauli(3)}}};
    mismatch.time = 1.0;
    CHECK_THROWS_AS(mismatch.validate(), ValidationError);
    HamiltonianSpec zero_slices = single({oracle::pauli(3), oracle::pauli(3)}, 1.0, 0);
    CHECK_THROWS_AS(zero_slices.validate(), ValidationError);
}
