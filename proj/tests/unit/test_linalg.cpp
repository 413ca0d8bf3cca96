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
#include "stator/linalg.hpp"

using namespace stator;
using Catch::Matchers::WithinAbs;

TEST_CASE("joint_dimension guards the dense size", "[linalg]") {
    CHECK(joint_dimension({2, 3, 4}) == 24);
    CHECK(joint_dimension(Dims(22, 2)) == (std::size_t{1} << 22));
    CHECK_THROWS_AS(joint_dimension(Dims(23, 2)), DimensionError);
}

TEST_CASE("StateVector validates its norm", "[linalg]") {
    Eigen::VectorXcd v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(StateVector({2}, v), ValidationError);
    CHECK_THROWS_AS(StateVector({3}, v.normalized()), ValidationError);
    StateVector ok = StateVector::normalized({2}, v);
    CHECK_THAT(ok.amps().norm(), WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(StateVector::normalized({2}, Eigen::VectorXcd::Zero(2)), ZeroProbabilityError);
    CHECK(StateVector::basis({2, 2}, 3).amps()[3] == Complex(1.0));
}

TEST_CASE("tensor products follow party-1-most-significant ordering", "[linalg]") {
    std::mt19937_64 g(7);
    Eigen::MatrixXcd a = oracle::random_unitary(2, g), b = oracle::random_unitary(3, g);
    OperatorMatrix t = tensor({OperatorMatrix({2}, a), OperatorMatrix({3}, b)});
    CHECK((t.entries() - oracle::kron(a, b)).norm() < 1e-13);
    CHECK(t.dims() == Dims{2, 3});

    StateVector s = tensor({StateVector::basis({2}, 1), StateVector::basis({3}, 2)});
    CHECK(s.amps()[5] == Complex(1.0));
}

TEST_CASE("expm_oracle agrees with the eigen-decomposition route", "[linalg][property]") {
    std::mt19937_64 g(11);
    for (std::size_t d : {2, 3, 4, 8}) {
        for (double scale : {0.0, 0.3, -1.7, 25.0}) {
            Eigen::MatrixXcd h = oracle::random_hermitian(d, g);
            OperatorMatrix u = expm_oracle(OperatorMatrix({d}, h), scale);
            INFO("d=" << d << " scale=" << scale);
            CHECK((u.entries() - oracle::expm_hermitian(h, scale)).cwiseAbs().maxCoeff() < 1e-11);
            CHECK(u.is_unitary(1e-11));
        }
    }
}

TEST_CASE("phase-invariant distance ignores a global phase only", "[linalg]") {
    std::mt19937_64 g(3);
    Eigen::MatrixXcd u = oracle::random_unitary(4, g);
    CHECK(op_distance_phase_invariant(u, u * std::polar(1.0, 2.1)) < 1e-14);
    Eigen::MatrixXcd v = oracle::random_unitary(4, g);
    double d = op_distance_phase_invariant(u, v);
    CHECK(d > 1e-3);
    CHECK_THAT(d, WithinAbs(oracle::phase_distance(u, v), 1e-5));
}

TEST_CASE("project_subsystem returns the Born probability", "[linalg][property]") {
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 20; trial++) {
        Eigen::VectorXcd amps = oracle::random_vector(12, g);
        StateVector s({3, 4}, amps);
        Eigen::VectorXcd onto = oracle::random_vector(3, g);
        ProjectionResult r = project_subsystem(s, 0, onto);
        // Independent: (<onto| (x) I) amps.
        Eigen::MatrixXcd bra = oracle::kron(onto.adjoint(), Eigen::MatrixXcd::Identity(4, 4));
        Eigen::VectorXcd rest = bra * amps;
        CHECK_THAT(r.probability, WithinAbs(rest.squaredNorm(), 1e-12));
        REQUIRE(r.state.has_value());
        CHECK(std::abs(std::abs(r.state->amps().dot(rest.normalized())) - 1.0) < 1e-12);
    }
    CHECK_FALSE(project_subsystem(StateVector::basis({2, 2}, 0), 0, Eigen::Vector2cd(0, 1)).state.has_value());
    CHECK_THROWS_AS(project_subsystem(StateVector::basis({2}, 0), 0, Eigen::Vector2cd(0, 1)), ValidationError);
}

TEST_CASE("apply_to_subsystems matches a full Kronecker operator", "[linalg][property]") {
    std::mt19937_64 g(9);
    Dims dims{2, 3, 2};
    Eigen::MatrixXcd op = oracle::random_unitary(4, g);  // acts on parties (2, 0) in that order
    Eigen::VectorXcd v = oracle::random_vector(12, g);
    Eigen::VectorXcd w = v;
    std::size_t targets[2] = {2, 0};
    detail::apply_to_subsystems(w, dims, targets, op);
    // Oracle: permute so the targets lead, apply op (x) I, permute back.
    Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(12);
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 3; b++)
            for (int c = 0; c < 2; c++)
                for (int a2 = 0; a2 < 2; a2++)
                    for (int c2 = 0; c2 < 2; c2++) {
                        expect[a * 6 + b * 2 + c] += op(c * 2 + a, c2 * 2 + a2) * v[a2 * 6 + b * 2 + c2];
                    }
    CHECK((w - expect).norm() < 1e-13);
}

TEST_CASE("gates", "[linalg]") {
    CHECK((gates::pauli_x() * gates::pauli_y() - Complex(0, 1) * gates::pauli_z()).norm() < 1e-15);
    CHECK((gates::hadamard() * gates::pauli_z() * gates::hadamard() - gates::pauli_x()).norm() < 1e-15);
    for (std::size_t n : {1, 2, 3, 4}) {
        CHECK((gates::collective_z_rotation(0.37, n).entries() - oracle::collective_z(0.37, n)).norm() < 1e-14);
        Eigen::MatrixXcd zs = gates::z_string(n).entries();
        CHECK((oracle::expm_hermitian(zs, 0.37) - oracle::collective_z(0.37, n)).norm() < 1e-12);
    }
}
