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

#include "stator/comm_analysis.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "stator/entropy.hpp"
#include "stator/error.hpp"
#include "stator/linalg.hpp"

using namespace stator;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTypicalSlack = 1e-12;

void check_block(std::size_t m) {
    if (m == 0) {
        throw ValidationError("block length must be positive");
    }
    if (m > kMaxBlockLength) {
        throw ValidationError("block length above 22 is too large to enumerate");
    }
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("probability outside [0, 1]");
    }
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= k; i++) {
        c = c * (n - k + i) / i;
    }
    return c;
}

/// log2 of the probability of one sequence of the given weight (-inf if impossible).
double log2_sequence_probability(std::size_t m, std::size_t w, double p) {
    double ones = 0.0, zeros = 0.0;
    if (w > 0) {
        if (p == 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        ones = static_cast<double>(w) * std::log2(p);
    }
    if (m > w) {
        if (p == 1.0) {
            return -std::numeric_limits<double>::infinity();
        }
        zeros = static_cast<double>(m - w) * std::log1p(-p) / std::numbers::ln2;
    }
    return ones + zeros;
}

double fit_r_squared(const std::vector<double> &x, const std::vector<double> &y, double *slope, double *intercept) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    *slope = sxy / sxx;
    *intercept = my - *slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        double e = y[i] - (*intercept + *slope * x[i]);
        ss_res += e * e;
    }
    return syy > 0 ? 1.0 - ss_res / syy : 1.0;
}

}  // namespace

bool stator::weight_is_typical(std::size_t block_length, std::size_t weight, double p, double delta) {
    double lp = log2_sequence_probability(block_length, weight, p);
    if (!std::isfinite(lp)) {
        return false;
    }
    double rate = -lp / static_cast<double>(block_length);
    return std::abs(rate - binary_entropy(p)) <= delta + kTypicalSlack;
}

TypicalSetReport stator::typical_set(std::size_t block_length, double p, double delta) {
    check_block(block_length);
    check_probability(p);
    if (!(delta >= 0.0)) {
        throw ValidationError("delta must be non-negative");
    }
    TypicalSetReport report{block_length, p, delta, 0, 0.0};
    for (std::size_t w = 0; w <= block_length; w++) {
        if (!weight_is_typical(block_length, w, p, delta)) {
            continue;
        }
        std::uint64_t count = binomial(block_length, w);
        report.set_size += count;
        report.mass += static_cast<double>(count) * std::exp2(log2_sequence_probability(block_length, w, p));
    }
    return report;
}

std::optional<std::size_t> stator::typical_threshold(double p, double delta, double epsilon, std::size_t max_block) {
    check_block(max_block);
    std::optional<std::size_t> threshold;
    for (std::size_t m = max_block; m >= 1; m--) {
        if (typical_set(m, p, delta).mass >= 1.0 - epsilon) {
            threshold = m;
        } else {
            break;
        }
    }
    return threshold;
}

HighProbabilitySet stator::smallest_high_probability_set(std::size_t block_length, double p, double epsilon) {
    check_block(block_length);
    check_probability(p);
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw ValidationError("epsilon must be in [0, 1)");
    }
    struct Class {
        double prob;
        std::uint64_t count;
    };
    std::vector<Class> classes;
    for (std::size_t w = 0; w <= block_length; w++) {
        double lp = log2_sequence_probability(block_length, w, p);
        if (std::isfinite(lp)) {
            classes.push_back({std::exp2(lp), binomial(block_length, w)});
        }
    }
    std::stable_sort(classes.begin(), classes.end(), [](const Class &a, const Class &b) {
        return a.prob > b.prob;
    });
    HighProbabilitySet out;
    const double goal = 1.0 - epsilon;
    for (const auto &c : classes) {
        double need = goal - out.mass;
        if (need <= 1e-15) {
            break;
        }
        double take = std::ceil(need / c.prob - 1e-9);
        std::uint64_t k = take >= static_cast<double>(c.count) ? c.count : static_cast<std::uint64_t>(std::max(1.0, take));
        out.size += k;
        out.mass += static_cast<double>(k) * c.prob;
    }
    return out;
}

double stator::compressed_state_fidelity(std::size_t block_length, double beta, double delta) {
    check_block(block_length);
    const double c = std::cos(beta), s = std::sin(beta);
    const double p = std::clamp(s * s, 0.0, 1.0);
    // Per weight class: amplitude magnitude of each sequence (the i^w phase cancels in the overlap).
    double kept = 0.0;
    for (std::size_t w = 0; w <= block_length; w++) {
        if (!weight_is_typical(block_length, w, p, delta)) {
            continue;
        }
        double amp = std::pow(std::abs(c), static_cast<double>(block_length - w)) * std::pow(std::abs(s), static_cast<double>(w));
        kept += static_cast<double>(binomial(block_length, w)) * amp * amp;
    }
    if (!(kept > 0.0)) {
        return 0.0;
    }
    // <Psi~|Psi> = sum_kept |a|^2 / sqrt(kept)
    double overlap = kept / std::sqrt(kept);
    return overlap * overlap;
}

double stator::chained_fidelity(std::span<const double> fidelities) {
    double f = 1.0;
    for (double x : fidelities) {
        if (!(x >= 0.0 && x <= 1.0 + 1e-12)) {
            throw ValidationError("fidelity outside [0, 1]");
        }
        f *= x;
    }
    return f;
}

WorkerRate stator::worker_comm_rate(const CostProfile &profile, double delta) {
    if (!(delta >= 0.0)) {
        throw ValidationError("delta must be non-negative");
    }
    WorkerRate rate;
    const double slack = (1.0 + delta) * (1.0 + delta);
    const auto &stages = profile.schedule.stages;
    for (std::size_t l = 0; l < stages.size(); l++) {
        double reach = profile.stage_reach_probs.at(l);
        switch (stages[l].kind) {
            case StageKind::kProbabilistic:
                rate.compressed += reach * resource_entanglement(stages[l].beta) * slack;
                break;
            case StageKind::kDeterministic:
                rate.terminal += reach;
                break;
            case StageKind::kLocal:
                break;
        }
    }
    rate.total = rate.compressed + rate.terminal;
    return rate;
}

double stator::leader_comm_rate(const CostProfile &profile, LeaderMode mode) {
    double bits = 0.0;
    const auto &stages = profile.schedule.stages;
    for (std::size_t l = 0; l < stages.size(); l++) {
        if (stages[l].kind == StageKind::kLocal) {
            continue;
        }
        double reach = profile.stage_reach_probs.at(l);
        if (mode == LeaderMode::kUncompressed) {
            bits += reach;
        } else {
            bits += reach * binary_entropy(std::clamp(profile.stage_success_probs.at(l), 0.0, 1.0));
        }
    }
    return bits;
}

CommProfile stator::comm_profile(const CostProfile &profile, double delta, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ValidationError("epsilon must be in (0, 1)");
    }
    return CommProfile{
        profile.alpha,
        worker_comm_rate(profile, delta).total,
        leader_comm_rate(profile, LeaderMode::kUncompressed),
        delta,
        epsilon,
    };
}

LeaderCommOptimum stator::optimize_leader_comm(double alpha, double delta, double epsilon) {
    if (!(alpha > 0.0 && alpha <= kPi / 4 + 1e-15)) {
        throw ValidationError("optimize_leader_comm requires 0 < alpha <= pi/4");
    }
    if (!(delta >= 0.0) || !(epsilon > 0.0 && epsilon < 1.0)) {
        throw ValidationError("delta must be >= 0 and epsilon in (0, 1)");
    }
    // Minimize the failure probability directly: near the optimum p_s is 1 - O(alpha)
    // and its flat top loses the argmax to cancellation.
    auto pf_of = [&](double beta) {
        const double gamma = gamma_for(alpha, beta);
        const double cb = std::cos(beta), sb = std::sin(beta), cg = std::cos(gamma), sg = std::sin(gamma);
        return cb * cb * sg * sg + sb * sb * cg * cg;
    };

    // Coarse scan over (0, pi/2), then golden section on the best bracket.
    constexpr std::size_t kGrid = 4096;
    const double h = (kPi / 2) / static_cast<double>(kGrid);
    std::size_t best_k = 1;
    double best = 2.0;
    for (std::size_t k = 1; k < kGrid; k++) {
        double v = pf_of(h * static_cast<double>(k));
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    double a = h * static_cast<double>(best_k - 1);
    double c = h * static_cast<double>(best_k + 1);
    a = std::max(a, 1e-300);
    c = std::min(c, kPi / 2 - 1e-15);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - g * (c - a), x2 = a + g * (c - a);
    double f1 = pf_of(x1), f2 = pf_of(x2);
    while (c - a > 1e-14 * c) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - g * (c - a);
            f1 = pf_of(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (c - a);
            f2 = pf_of(x2);
        }
        if (x2 <= x1) {
            break;
        }
    }

    LeaderCommOptimum out;
    out.beta = 0.5 * (a + c);
    std::array<double, 1> betas{out.beta};
    out.schedule = schedule_from_betas(alpha, betas, 2);
    out.failure_probability = pf_of(out.beta);
    out.success_probability = 1.0 - out.failure_probability;
    const double e = resource_entanglement(out.beta);
    const double pf = out.failure_probability;
    out.ebits = e + pf;
    out.profile = CommProfile{
        alpha,
        e * (1.0 + delta) * (1.0 + delta) + pf,
        binary_entropy(std::clamp(pf, 0.0, 1.0)) + pf,
        delta,
        epsilon,
    };
    return out;
}

LeaderRatioCurve stator::leader_ratio_curve(std::span<const double> alphas) {
    if (alphas.size() < 3) {
        throw ValidationError("leader_ratio_curve needs at least three angles");
    }
    LeaderRatioCurve curve;
    std::vector<double> x, y;
    for (double a : alphas) {
        double rate = optimize_leader_comm(a).profile.leader_bits_rate;
        curve.rows.push_back({a, rate, rate / a});
        x.push_back(std::log2(1.0 / a));
        y.push_back(rate / a);
    }
    curve.r_squared = fit_r_squared(x, y, &curve.slope, &curve.intercept);
    return curve;
}

FourierCheck stator::fourier_parity_check(
    std::size_t block_length, double beta, double delta, std::size_t parties, std::size_t max_patterns) {
    if (block_length == 0 || block_length > 8) {
        throw ValidationError("fourier_parity_check simulates block lengths 1..8");
    }
    if (parties < 2) {
        throw ValidationError("need at least two parties");
    }
    const double c = std::cos(beta), s = std::sin(beta);
    const double p = std::clamp(s * s, 0.0, 1.0);

    // Typical sequences in increasing integer order; idx(i) is the position in this list.
    std::vector<Complex> mu;
    for (std::uint32_t seq = 0; seq < (1u << block_length); seq++) {
        auto w = static_cast<std::size_t>(std::popcount(seq));
        if (!weight_is_typical(block_length, w, p, delta)) {
            continue;
        }
        Complex amp = std::pow(c, static_cast<double>(block_length - w)) * std::pow(Complex(0.0, s), static_cast<double>(w));
        mu.push_back(amp);
    }
    FourierCheck check;
    check.set_size = mu.size();
    if (mu.empty()) {
        return check;
    }
    Eigen::VectorXcd mu_vec = Eigen::Map<Eigen::VectorXcd>(mu.data(), static_cast<Eigen::Index>(mu.size()));
    mu_vec.normalize();
    const std::size_t d = mu.size();

    Dims dims(parties, d);
    std::size_t total = joint_dimension(dims);
    Eigen::VectorXcd joint = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    std::size_t diagonal_step = 0;
    for (std::size_t j = 0; j < parties; j++) {
        diagonal_step = diagonal_step * d + 1;
    }
    for (std::size_t k = 0; k < d; k++) {
        joint[static_cast<Eigen::Index>(k * diagonal_step)] = mu_vec[static_cast<Eigen::Index>(k)];
    }

    const double two_pi_over_d = 2.0 * kPi / static_cast<double>(d);
    auto fourier = [&](std::size_t outcome) {
        Eigen::VectorXcd f(static_cast<Eigen::Index>(d));
        for (std::size_t k = 0; k < d; k++) {
            f[static_cast<Eigen::Index>(k)] =
                std::polar(1.0 / std::sqrt(static_cast<double>(d)), -two_pi_over_d * static_cast<double>((outcome * k) % d));
        }
        return f;
    };

    std::function<void(const Eigen::VectorXcd &, const Dims &, std::size_t)> dfs =
        [&](const Eigen::VectorXcd &amps, const Dims &cur, std::size_t sum) {
            if (check.patterns_checked >= max_patterns) {
                return;
            }
            if (cur.size() == 1) {
                Eigen::VectorXcd leader = amps;
                for (std::size_t k = 0; k < d; k++) {
                    leader[static_cast<Eigen::Index>(k)] *= std::polar(1.0, -two_pi_over_d * static_cast<double>((k * sum) % d));
                }
                leader.normalize();
                Complex phase = mu_vec.dot(leader);  // conj(leader) . mu
                phase /= std::abs(phase);
                double dev = (leader * phase - mu_vec).cwiseAbs().maxCoeff();
                check.max_deviation = std::max(check.max_deviation, dev);
                check.patterns_checked += 1;
                return;
            }
            for (std::size_t outcome = 0; outcome < d && check.patterns_checked < max_patterns; outcome++) {
                Eigen::VectorXcd next = detail::contract_subsystem(amps, cur, 0, fourier(outcome));
                dfs(next, detail::remove_party(cur, 0), (sum + outcome) % d);
            }
        };
    dfs(joint, dims, 0);
    return check;
}
