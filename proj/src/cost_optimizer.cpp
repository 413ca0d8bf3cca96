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

#include "stator/cost_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "stator/entropy.hpp"
#include "stator/error.hpp"

using namespace stator;

namespace {

constexpr double kPi = std::numbers::pi;

// The coarse search runs over z = log(tan(beta) / tan(r)). Useful moves sit
// near z = 0 (success probability between 0.3 and 0.75 at small r).
constexpr double kSearchZMin = -8.0;
constexpr double kSearchZMax = 8.0;

double reduce_sum(double x) {
    // x = r + alpha' with r <= pi/4 and alpha' < pi/2.
    return x <= kPi / 4 ? x : std::abs(kPi / 2 - x);
}

double entropy_of(double p) {
    return binary_entropy(std::clamp(p, 0.0, 1.0));
}

}  // namespace

CostProfile stator::expected_cost(const StageSchedule &schedule) {
    schedule.validate();
    CostProfile profile;
    profile.alpha = schedule.alpha;
    profile.schedule = schedule;
    double reach = 1.0;
    for (const auto &stage : schedule.stages) {
        double ps = success_probability(stage);
        profile.stage_reach_probs.push_back(reach);
        profile.stage_success_probs.push_back(ps);
        switch (stage.kind) {
            case StageKind::kProbabilistic:
                profile.expected_ebits += reach * resource_entanglement(stage.beta);
                break;
            case StageKind::kDeterministic:
                profile.expected_ebits += reach * 1.0;
                break;
            case StageKind::kLocal:
                break;
        }
        if (stage.kind != StageKind::kLocal) {
            profile.expected_bits_leader += reach;
            profile.expected_bits_worker += reach;
        }
        reach = stage.kind == StageKind::kProbabilistic ? reach * (1.0 - ps) : 0.0;
    }
    return profile;
}

void OptimizerConfig::validate() const {
    if (max_stages < 1) {
        throw ValidationError("max_stages must be at least 1");
    }
    if (beta_grid < 8) {
        throw ValidationError("beta_grid must be at least 8");
    }
    if (!(refine_tol > 0.0 && refine_tol <= 1e-9)) {
        throw ValidationError("refine_tol must be in (0, 1e-9]");
    }
    if (!(memo_min_alpha > 0.0 && memo_min_alpha <= 1e-8)) {
        throw ValidationError("memo grid must reach down to 1e-8");
    }
    if (memo_points_per_decade < 16) {
        throw ValidationError("memo_points_per_decade must be at least 16");
    }
    if (!(min_success_probability >= 0.0 && min_success_probability < 0.5)) {
        throw ValidationError("min_success_probability must be in [0, 0.5)");
    }
}

EntanglementOptimizer::EntanglementOptimizer(OptimizerConfig config) : config_(config) {
    config_.validate();
    log_lo_ = std::log(config_.memo_min_alpha);
    const double log_hi = std::log(kPi / 4);
    const double nominal = std::log(10.0) / static_cast<double>(config_.memo_points_per_decade);
    points_ = static_cast<std::size_t>(std::ceil((log_hi - log_lo_) / nominal)) + 1;
    step_ = (log_hi - log_lo_) / static_cast<double>(points_ - 1);

    coarse_z_.resize(config_.beta_grid);
    const double dz = (kSearchZMax - kSearchZMin) / static_cast<double>(config_.beta_grid - 1);
    for (std::size_t k = 0; k < config_.beta_grid; k++) {
        coarse_z_[k] = kSearchZMin + dz * static_cast<double>(k);
    }

    auto finish = [&](Table &t) {
        const std::size_t n = t.g.size();
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; i++) {
            d[i] = t.g[i + 1] - t.g[i];
        }
        t.slope.assign(n, 0.0);
        t.slope[0] = d[0];
        t.slope[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; i++) {
            // Harmonic mean of neighbouring secants keeps the interpolant monotone.
            t.slope[i] = d[i - 1] * d[i] <= 0.0 ? 0.0 : 2.0 / (1.0 / d[i - 1] + 1.0 / d[i]);
        }
    };

    // One stage left: the deterministic stage, F = 1.
    Table first;
    first.g.resize(points_);
    for (std::size_t i = 0; i < points_; i++) {
        first.g[i] = 1.0 / std::exp(log_lo_ + step_ * static_cast<double>(i));
    }
    finish(first);
    tables_.push_back(std::move(first));

    std::size_t threads = config_.threads;
    if (threads == 0) {
        threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, points_);

    for (std::size_t k = 2; k <= config_.max_stages; k++) {
        const Table &prev = tables_.back();
        Table next;
        next.g.resize(points_);
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; i++) {
                double r = std::exp(log_lo_ + step_ * static_cast<double>(i));
                next.g[i] = search(r, &prev).value / r;
            }
        };
        if (threads == 1) {
            work(0, points_);
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (points_ + threads - 1) / threads;
            for (std::size_t t = 0; t < threads; t++) {
                std::size_t b = t * chunk, e = std::min(points_, b + chunk);
                if (b < e) {
                    pool.emplace_back(work, b, e);
                }
            }
            for (auto &th : pool) {
                th.join();
            }
        }
        if (next.g == prev.g) {
            break;  // fixed point: every deeper table is identical
        }
        finish(next);
        tables_.push_back(std::move(next));
    }
}

double EntanglementOptimizer::interpolate(const Table &table, double r) const {
    if (r <= 0.0) {
        return 0.0;
    }
    const double x = (std::log(r) - log_lo_) / step_;
    const std::size_t n = points_;
    if (x <= 0.0) {
        return std::min(1.0, table.g[0] * r);
    }
    if (x >= static_cast<double>(n - 1)) {
        return std::min(1.0, table.g[n - 1] * r);
    }
    auto i = static_cast<std::size_t>(x);
    double f = x - static_cast<double>(i);
    double f2 = f * f, f3 = f2 * f;
    double h00 = 2 * f3 - 3 * f2 + 1;
    double h10 = f3 - 2 * f2 + f;
    double h01 = -2 * f3 + 3 * f2;
    double h11 = f3 - f2;
    double g = h00 * table.g[i] + h10 * table.slope[i] + h01 * table.g[i + 1] + h11 * table.slope[i + 1];
    return std::min(1.0, g * r);
}

const EntanglementOptimizer::Table *EntanglementOptimizer::table_for(std::size_t stages) const {
    if (stages == 0) {
        throw ValidationError("at least one stage is required");
    }
    return &tables_[std::min(stages, tables_.size()) - 1];
}

double EntanglementOptimizer::evaluate(double r, double t, const Table *next, double *success) const {
    const double tr = std::tan(r);
    const double t2 = t * t;
    const double tr2 = tr * tr;
    const double den = t2 + tr2;
    const double cos2_gamma = t2 / den;
    const double sin2_gamma = tr2 / den;
    const double sin2_beta = t2 / (1.0 + t2);
    const double cos2_beta = 1.0 / (1.0 + t2);
    const double ps = cos2_beta * cos2_gamma + sin2_beta * sin2_gamma;
    const double pf = cos2_beta * sin2_gamma + sin2_beta * cos2_gamma;
    if (success != nullptr) {
        *success = ps;
    }
    const double residual = reduce_sum(r + std::atan(t2 / tr));
    return entropy_of(sin2_beta) + pf * interpolate(*next, residual);
}

StageChoice EntanglementOptimizer::search(double r, const Table *next) const {
    StageChoice best;  // the deterministic stage, value 1
    const double tr = std::tan(r);
    const double psmin = config_.min_success_probability;
    auto at = [&](double z, double *ps) {
        return evaluate(r, tr * std::exp(z), next, ps);
    };

    std::size_t best_k = coarse_z_.size();
    for (std::size_t k = 0; k < coarse_z_.size(); k++) {
        double ps;
        double v = at(coarse_z_[k], &ps);
        if (ps >= psmin && v < best.value) {
            best.value = v;
            best_k = k;
        }
    }
    if (best_k == coarse_z_.size()) {
        return best;
    }

    const double dz = coarse_z_[1] - coarse_z_[0];
    double best_z = coarse_z_[best_k];
    double a = best_z - dz, c = best_z + dz;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - g * (c - a), x2 = a + g * (c - a);
    double p1, p2;
    double f1 = at(x1, &p1), f2 = at(x2, &p2);
    while (c - a > config_.refine_tol) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - g * (c - a);
            f1 = at(x1, &p1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (c - a);
            f2 = at(x2, &p2);
        }
    }
    double mid = 0.5 * (a + c);
    double pm;
    double vm = at(mid, &pm);
    if (pm >= psmin && vm < best.value) {
        best.value = vm;
        best_z = mid;
    }
    double ps;
    best.value = at(best_z, &ps);
    best.beta = std::atan(tr * std::exp(best_z));
    best.success_probability = ps;
    best.deterministic = false;
    return best;
}

double EntanglementOptimizer::value(double alpha, std::size_t stages) const {
    double r = reduce_angle(alpha);
    const Table *t = table_for(stages);
    if (r == 0.0) {
        return 0.0;
    }
    return interpolate(*t, r);
}

double EntanglementOptimizer::objective(double reduced_alpha, double beta, std::size_t stages) const {
    if (stages < 2) {
        throw ValidationError("a probabilistic stage needs a later stage to fall back on");
    }
    if (!(reduced_alpha > 0.0 && reduced_alpha <= kPi / 4 + 1e-15)) {
        throw ValidationError("objective expects a reduced angle in (0, pi/4]");
    }
    if (!(beta > 0.0 && beta < kPi / 2)) {
        throw ValidationError("beta must lie in (0, pi/2)");
    }
    return evaluate(reduced_alpha, std::tan(beta), table_for(stages - 1), nullptr);
}

StageChoice EntanglementOptimizer::best_stage(double reduced_alpha, std::size_t stages) const {
    if (!(reduced_alpha >= 0.0 && reduced_alpha <= kPi / 4 + 1e-15)) {
        throw ValidationError("best_stage expects a reduced angle in [0, pi/4]");
    }
    if (stages < 2 || reduced_alpha == 0.0) {
        return StageChoice{};
    }
    return search(reduced_alpha, table_for(stages - 1));
}

CostProfile EntanglementOptimizer::optimize_schedule(double alpha) const {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw ValidationError("optimize_schedule requires a positive angle");
    }
    StageSchedule schedule;
    schedule.alpha = fold_angle(alpha);
    schedule.max_stages = config_.max_stages;
    double a = schedule.alpha;
    for (std::size_t l = 1; l <= config_.max_stages; l++) {
        if (angles_equivalent(a, 0.0, 1e-15)) {
            break;
        }
        if (angles_equivalent(a, kPi / 2, 1e-15)) {
            schedule.stages.push_back(local_stage(l));
            break;
        }
        std::size_t remaining = config_.max_stages - l + 1;
        StageChoice choice = best_stage(reduce_angle(a), remaining);
        if (choice.deterministic) {
            schedule.stages.push_back(deterministic_stage(a, l));
            break;
        }
        // Above pi/4 the mirrored resource pi/2 - beta has the same cost and odds.
        double beta = std::abs(a) <= kPi / 4 ? choice.beta : kPi / 2 - choice.beta;
        StageParams p = probabilistic_stage(a, beta, l);
        schedule.stages.push_back(p);
        a = failure_residual(p).alpha_next;
    }
    return expected_cost(schedule);
}

CostProfile stator::optimize_schedule(double alpha, const EntanglementOptimizer &optimizer) {
    return optimizer.optimize_schedule(alpha);
}

double stator::cdkl_dyadic_cost(unsigned n) {
    if (n == 0 || n > 60) {
        throw ValidationError("dyadic exponent must be in 1..60");
    }
    double total = 0.0;
    for (unsigned l = 1; l < n; l++) {
        double angle = std::ldexp(kPi, static_cast<int>(l) - 1 - static_cast<int>(n));
        double s = std::sin(angle);
        total += std::ldexp(1.0, 1 - static_cast<int>(l)) * entropy_of(s * s);
    }
    return total;
}

double stator::cdkl_cost(double alpha) {
    if (!(alpha > 0.0 && alpha < kPi)) {
        throw ValidationError("cdkl_cost requires 0 < alpha < pi");
    }
    double residual = alpha;
    double total = 0.0;
    for (unsigned n = 1; n <= 60 && residual >= 1e-12 * alpha; n++) {
        double term = std::ldexp(kPi, -static_cast<int>(n));
        if (residual - term >= -1e-15 * alpha) {
            total += cdkl_dyadic_cost(n);
            residual = std::max(0.0, residual - term);
        }
    }
    return total;
}

double stator::asymptotic_tail(double a, double tail_tol, std::size_t max_terms) {
    double total = 0.0;
    for (std::size_t k = 1; k <= max_terms; k++) {
        double term = std::ldexp(1.0, static_cast<int>(k)) * resource_entanglement(std::ldexp(a, -static_cast<int>(k)));
        total += term;
        if (term < tail_tol * total) {
            break;
        }
    }
    return total;
}

double stator::asymptotic_bound(const EntanglementOptimizer &optimizer, double a, double tail_tol) {
    const double lo = std::ldexp(kPi, -20), hi = std::ldexp(kPi, -19);
    if (!(a >= lo * (1 - 1e-12) && a < hi)) {
        throw ValidationError("asymptotic_bound expects A in [pi/2^20, pi/2^19)");
    }
    return (optimizer.optimize_schedule(a).expected_ebits + asymptotic_tail(a, tail_tol)) / a;
}

std::vector<CurveRow> stator::sweep_entanglement_curve(
    const EntanglementOptimizer &optimizer, std::span<const double> alphas) {
    std::vector<CurveRow> rows;
    rows.reserve(alphas.size());
    for (double a : alphas) {
        if (!(a > 0.0 && a <= kPi / 4 + 1e-15)) {
            throw ValidationError("curve angles must lie in (0, pi/4]");
        }
        rows.push_back({a, optimizer.optimize_schedule(a).expected_ebits, cdkl_cost(a)});
    }
    return rows;
}

std::vector<double> stator::log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi >= lo) || n == 0) {
        throw ValidationError("log_spaced needs 0 < lo <= hi and n >= 1");
    }
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; i++) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}
