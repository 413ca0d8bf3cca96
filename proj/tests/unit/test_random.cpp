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

#include <array>

#include "catch_amalgamated.hpp"
#include "stator/error.hpp"
#include "stator/random.hpp"

using namespace stator;

TEST_CASE("identical seeds give identical streams", "[random]") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; i++) {
        auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs = differs || x != c.next_u64();
    }
    CHECK(differs);
}

TEST_CASE("split streams are reproducible and distinct", "[random]") {
    Rng a(1), b(1);
    Rng ca = a.split(), cb = b.split();
    CHECK(ca.next_u64() == cb.next_u64());
    CHECK(a.next_u64() == b.next_u64());
    Rng parent(1);
    Rng child = parent.split();
    CHECK(child.next_u64() != parent.next_u64());
}

TEST_CASE("uniform and normal moments", "[random][property]") {
    Rng r(9);
    double s = 0, s2 = 0, n1 = 0, n2 = 0;
    const int count = 200000;
    for (int i = 0; i < count; i++) {
        double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
        double z = r.normal();
        n1 += z;
        n2 += z * z;
    }
    CHECK(std::abs(s / count - 0.5) < 0.005);
    CHECK(std::abs(s2 / count - 1.0 / 3.0) < 0.005);
    CHECK(std::abs(n1 / count) < 0.01);
    CHECK(std::abs(n2 / count - 1.0) < 0.02);
}

TEST_CASE("sampled outcomes follow the probabilities", "[random][property]") {
    SampledOutcomes src{Rng(5)};
    std::array<double, 3> probs{0.2, 0.5, 0.3};
    std::array<int, 3> counts{};
    const int n = 100000;
    for (int i = 0; i < n; i++) {
        counts[src.choose(probs)]++;
    }
    for (int k = 0; k < 3; k++) {
        double sigma = std::sqrt(probs[k] * (1 - probs[k]) / n);
        CHECK(std::abs(counts[k] / double(n) - probs[k]) < 5 * sigma);
    }
}

TEST_CASE("forced outcomes replay and reject impossible branches", "[random]") {
    ForcedOutcomes f({1, 0});
    std::array<double, 2> p{0.5, 0.5};
    CHECK(f.choose(p) == 1);
    CHECK(f.choose(p) == 0);
    CHECK(f.consumed() == 2);
    CHECK_THROWS_AS(f.choose(p), ValidationError);
    ForcedOutcomes g({1});
    std::array<double, 2> sure{1.0, 0.0};
    CHECK_THROWS_AS(g.choose(sure), ZeroProbabilityError);
}
