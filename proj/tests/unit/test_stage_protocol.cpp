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
#include "stator/cost_optimizer.hpp"
#include "stator/error.hpp"
#include "stator/stage_protocol.hpp"

using namespace stator;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<int> bits_of(std::size_t pattern, std::size_t workers) {
    std::vector<int> b(workers);
    for (std::size_t j = 0; j < workers; j++) {
        b[j] = static_cast<int>((pattern >> j) & 1);
    }
    return b;
}

StateVector random_state(std::size_t n, std::mt19937_64 &g) {
    return StateVector(Dims(n, 2), oracle::random_vector(std::size_t{1} << n, g));
}

}  // namespace

TEST_CASE("fold and reduce angles", "[stage]") {
    const double pi = oracle::kPi;
    CHECK_THAT(fold_angle(pi), WithinAbs(0.0, 1e-15));
    CHECK_THAT(fold_angle(pi / 2), WithinAbs(pi / 2, 1e-15));
    CHECK_THAT(fold_angle(-pi / 2), WithinAbs(pi / 2, 1e-15));
    CHECK_THAT(fold_angle(3.0), WithinAbs(3.0 - pi, 1e-15));
    CHECK_THAT(reduce_angle(-0.3), WithinAbs(0.3, 1e-15));
    CHECK_THAT(reduce_angle(pi / 2 - 0.1), WithinAbs(0.1, 1e-15));
    CHECK(angles_equivalent(0.2, 0.2 + pi));
    CHECK_FALSE(angles_equivalent(0.2, 0.2 + pi / 2));
}

TEST_CASE("fold and reduce are idempotent and bounded", "[stage][property]") {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 1000; i++) {
        double x = u(g);
        double f = fold_angle(x);
        CHECK(f > -oracle::kPi / 2);
        CHECK(f <= oracle::kPi / 2);
        CHECK_THAT(fold_angle(f), WithinAbs(f, 1e-15));
        double r = reduce_angle(x);
        CHECK(r >= 0.0);
        CHECK(r <= oracle::kPi / 4 + 1e-15);
        CHECK_THAT(reduce_angle(r), WithinAbs(r, 1e-15));
    }
}

TEST_CASE("stage relation tan(beta) tan(gamma) = tan(alpha)", "[stage][property]") {
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> ua(-1.5, 1.5), ub(0.01, 1.56);
    for (int i = 0; i < 500; i++) {
        double alpha = ua(g), beta = ub(g);
        StageParams p = probabilistic_stage(alpha, beta, 1);
        CHECK_THAT(std::tan(p.beta) * std::tan(p.gamma), WithinAbs(std::tan(p.alpha), 1e-9 * (1 + std::abs(std::tan(p.alpha)))));
        CHECK_NOTHROW(check_stage_relation(p));
        CHECK(angles_equivalent(success_rotation(p), p.alpha, 1e-10));
    }
    StageParams broken = probabilistic_stage(0.3, 0.4, 1);
    broken.gamma += 0.1;
    CHECK_THROWS_AS(check_stage_relation(broken), ValidationError);
}

TEST_CASE("success probability closed forms", "[stage]") {
    // beta = alpha gives gamma = pi/4 and probability 1/2 whatever alpha is.
    for (double a : {0.01, 0.2, 0.7}) {
        StageParams p = probabilistic_stage(a, a, 1);
        CHECK_THAT(p.gamma, WithinAbs(oracle::kPi / 4, 1e-14));
        CHECK_THAT(success_probability(p), WithinAbs(0.5, 1e-14));
    }
    CHECK_THAT(success_probability(deterministic_stage(0.3, 1)), WithinAbs(0.5, 1e-14));
    CHECK(success_probability(local_stage(1)) == 1.0);
}

TEST_CASE("branch operators match a gate-by-gate circuit", "[stage][property]") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> ua(-0.7, 0.7), ub(0.05, 1.5);
    for (std::size_t n : {2, 3, 4}) {
        for (int trial = 0; trial < 4; trial++) {
            StageParams p = probabilistic_stage(ua(g), ub(g), 1);
            for (std::size_t pattern = 0; pattern < (std::size_t{1} << (n - 1)); pattern++) {
                auto bits = bits_of(pattern, n - 1);
                for (int branch : {0, 1}) {
                    OperatorMatrix k = stage_branch_operator(n, p, bits, static_cast<Branch>(branch));
                    Eigen::MatrixXcd expect = oracle::as_unitary_scale(oracle::stage_operator(n, p.beta, p.gamma, bits, branch));
                    INFO("n=" << n << " pattern=" << pattern << " branch=" << branch);
                    CHECK(oracle::phase_distance(k.entries(), expect) < 1e-9);
                }
            }
            // Success implements U(alpha), failure U(alpha').
            std::vector<int> zeros(n - 1, 0);
            CHECK(op_distance_phase_invariant(stage_branch_operator(n, p, zeros, Branch::kSuccess).entries(),
                                              oracle::collective_z(p.alpha, n)) < 1e-10);
            FailureResidual f = failure_residual(p);
            CHECK(op_distance_phase_invariant(stage_branch_operator(n, p, zeros, Branch::kFailure).entries(),
                                              oracle::collective_z(f.alpha_prime, n)) < 1e-10);
            CHECK(angles_equivalent(f.alpha_prime + f.alpha_next, p.alpha, 1e-12));
        }
    }
}

TEST_CASE("deterministic stage succeeds on both branches", "[stage]") {
    for (std::size_t n : {2, 3}) {
        StageParams p = deterministic_stage(0.37, 1);
        std::vector<int> zeros(n - 1, 0);
        for (Branch b : {Branch::kSuccess, Branch::kFailure}) {
            CHECK(op_distance_phase_invariant(stage_branch_operator(n, p, zeros, b).entries(),
                                              oracle::collective_z(0.37, n)) < 1e-10);
        }
    }
}

TEST_CASE("per-stage success probability is state independent", "[stage][property]") {
    std::mt19937_64 g(4);
    for (std::size_t n : {2, 3}) {
        StageParams p = probabilistic_stage(0.21, 0.33, 1);
        for (int trial = 0; trial < 20; trial++) {
            StateVector s = random_state(n, g);
            double total_success = 0.0, total = 0.0;
            for (std::size_t pattern = 0; pattern < (std::size_t{1} << (n - 1)); pattern++) {
                for (std::size_t branch : {0, 1}) {
                    std::vector<std::size_t> forced;
                    for (int b : bits_of(pattern, n - 1)) {
                        forced.push_back(static_cast<std::size_t>(b));
                    }
                    forced.push_back(branch);
                    ForcedOutcomes src(forced);
                    StageResult r = run_stage(s, p, src);
                    total += r.outcome.probability;
                    if (branch == 0) {
                        total_success += r.outcome.probability;
                    }
                }
            }
            CHECK_THAT(total, WithinAbs(1.0, 1e-12));
            CHECK_THAT(total_success, WithinAbs(success_probability(p), 1e-12));
        }
    }
}

TEST_CASE("doubling schedule structure", "[stage]") {
    StageSchedule s = cdkl_schedule(oracle::kPi / 64, 25);
    REQUIRE(s.stages.size() == 5);  // pi/64, pi/32, pi/16, pi/8, then deterministic at pi/4
    for (std::size_t l = 0; l + 1 < s.stages.size(); l++) {
        CHECK_THAT(s.stages[l].beta, WithinAbs(std::abs(s.stages[l].alpha), 1e-15));
        CHECK_THAT(std::abs(s.stages[l + 1].alpha), WithinAbs(2 * std::abs(s.stages[l].alpha), 1e-14));
    }
    CHECK(s.terminal().kind == StageKind::kDeterministic);
    CHECK(cdkl_schedule(0.0).empty());
    CHECK(deterministic_schedule(oracle::kPi / 2).stages[0].kind == StageKind::kLocal);
    CHECK_THROWS_AS(cdkl_schedule(0.1, 0), ValidationError);
    // Capped schedules end in a deterministic stage.
    StageSchedule capped = cdkl_schedule(1e-6, 3);
    CHECK(capped.stages.size() == 3);
    CHECK(capped.terminal().kind == StageKind::kDeterministic);
}

TEST_CASE("run_protocol always implements U(alpha)", "[stage][property]") {
    std::mt19937_64 g(6);
    Rng rng(17);
    for (std::size_t n : {2, 3}) {
        for (double alpha : {0.05, -0.4, 1.2}) {
            StageSchedule s = cdkl_schedule(alpha, 8);
            for (int run = 0; run < 25; run++) {
                StateVector in = random_state(n, g);
                SampledOutcomes src(rng.split());
                Transcript t = run_protocol(alpha, s, in, src);
                CHECK(op_distance_phase_invariant(t.net_operator.entries(), oracle::collective_z(alpha, n)) < 1e-10);
                Eigen::VectorXcd expect = oracle::collective_z(alpha, n) * in.amps();
                CHECK(std::abs(std::abs(expect.dot(t.final_state.amps())) - 1.0) < 1e-10);
                CHECK(t.bits_from_workers.size() == n - 1);
            }
        }
    }
}

TEST_CASE("identical seeds give identical transcripts", "[stage]") {
    StageSchedule s = cdkl_schedule(0.01, 25);
    StateVector in = StateVector::basis({2, 2, 2}, 5);
    for (int rep = 0; rep < 5; rep++) {
        SampledOutcomes a{Rng(99)}, b{Rng(99)};
        Transcript ta = run_protocol(0.01, s, in, a), tb = run_protocol(0.01, s, in, b);
        REQUIRE(ta.outcomes.size() == tb.outcomes.size());
        for (std::size_t i = 0; i < ta.outcomes.size(); i++) {
            CHECK(ta.outcomes[i].worker_bits == tb.outcomes[i].worker_bits);
            CHECK(ta.outcomes[i].branch == tb.outcomes[i].branch);
        }
        CHECK(ta.ebits_consumed == tb.ebits_consumed);
    }
}

TEST_CASE("leaf enumeration is exact and complete", "[stage][property]") {
    for (std::size_t n : {2, 3}) {
        std::vector<double> betas{0.4, 0.2, 0.6};
        StageSchedule s = schedule_from_betas(0.13, betas, 25);
        LeafSummary sum = enumerate_protocol_leaves(s, n);
        CHECK(sum.max_distance < 1e-10);
        CHECK_THAT(sum.total_probability, WithinAbs(1.0, 1e-12));
        CHECK_THAT(sum.expected_ebits, WithinAbs(expected_cost(s).expected_ebits, 1e-12));
    }
}

TEST_CASE("stage inputs are validated", "[stage]") {
    StageParams p = probabilistic_stage(0.2, 0.3, 1);
    CHECK_THROWS_AS(stage_branch_operator(3, p, std::vector<int>{0}, Branch::kSuccess), ValidationError);
    CHECK_THROWS_AS(gamma_for(0.2, 0.0), ValidationError);
    ForcedOutcomes short_list({0});
    CHECK_THROWS_AS(run_stage(StateVector::basis({2, 2}, 0), p, short_list), ValidationError);
    CHECK_THROWS_AS(run_protocol(0.3, cdkl_schedule(0.2), StateVector::basis({2, 2}, 0), short_list),
                    ValidationError);
}
