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

#ifndef STATOR_COST_OPTIMIZER_HPP
#define STATOR_COST_OPTIMIZER_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stator/stage_protocol.hpp"

namespace stator {

/// Asymptotic ebits per radian of the optimized schedules.
inline constexpr double kOptimizedEbitsPerRadian = 5.6418;

struct CostProfile {
    double alpha = 0.0;
    double expected_ebits = 0.0;
    StageSchedule schedule;
    std::vector<double> stage_reach_probs;    // p(l): probability stage l runs
    std::vector<double> stage_success_probs;  // projection success probability of stage l
    double expected_bits_leader = 0.0;        // raw bits, party N
    double expected_bits_worker = 0.0;        // raw bits, each of parties 1..N-1
};

/// Analytic expectations of a schedule.
CostProfile expected_cost(const StageSchedule &schedule);

struct OptimizerConfig {
    std::size_t max_stages = 25;  // L; the L-th stage is always deterministic
    std::size_t beta_grid = 1024;  // coarse search points per stage
    double refine_tol = 1e-9;      // golden-section width in log tan(beta)
    double memo_min_alpha = 1e-8;
    std::size_t memo_points_per_decade = 2048;
    /// Moves whose success probability is below this are skipped. They only
    /// approach the optimum from above (a near-identity stage followed by the
    /// same problem with one stage fewer) and otherwise let table noise pick them.
    double min_success_probability = 0.01;
    std::size_t threads = 0;  // 0: hardware concurrency

    void validate() const;
};

struct StageChoice {
    double beta = 0.0;  // for the reduced angle in [0, pi/4]
    double value = 1.0;
    double success_probability = 0.5;
    bool deterministic = true;
};

/// Expected-entanglement minimizer. Builds F^{(k)}(r), the least expected
/// ebits to implement U(r) with at most k stages, backwards from F^{(1)} = 1,
/// memoized as F/r on a log-spaced grid with monotone cubic interpolation.
/// Construction is the expensive part; afterwards the object is immutable.
class EntanglementOptimizer {
   public:
    explicit EntanglementOptimizer(OptimizerConfig config = {});

    const OptimizerConfig &config() const {
        return config_;
    }

    /// F^{(stages)} at reduce_angle(alpha).
    double value(double alpha, std::size_t stages) const;
    double value(double alpha) const {
        return value(alpha, config_.max_stages);
    }

    /// E(beta) + p_fail F^{(stages-1)}(next) for a stage on reduced angle r.
    double objective(double reduced_alpha, double beta, std::size_t stages) const;

    /// Best first move for a reduced angle with `stages` stages available.
    StageChoice best_stage(double reduced_alpha, std::size_t stages) const;

    CostProfile optimize_schedule(double alpha) const;

    /// Number of distinct tables built before the recursion reached a fixed point.
    std::size_t tables_built() const {
        return tables_.size();
    }

   private:
    struct Table {
        std::vector<double> g;      // F / r at the grid points
        std::vector<double> slope;  // Hermite slopes per grid step
    };

    double interpolate(const Table &table, double r) const;
    const Table *table_for(std::size_t stages) const;
    StageChoice search(double r, const Table *next) const;
    double evaluate(double r, double t, const Table *next, double *success) const;

    OptimizerConfig config_;
    double log_lo_ = 0.0;
    double step_ = 0.0;
    std::size_t points_ = 0;
    std::vector<double> coarse_z_;
    std::vector<Table> tables_;  // tables_[k-1] = F^{(k)}
};

/// CostProfile of the optimized schedule for alpha.
CostProfile optimize_schedule(double alpha, const EntanglementOptimizer &optimizer);

/// Baseline cost of U(pi/2^n) with the doubling schedule: sum_{l<n} 2^{1-l} h(sin^2(2^{l-1} pi/2^n)).
double cdkl_dyadic_cost(unsigned n);

/// Baseline cost of U(alpha): sum of dyadic costs over the binary digits of alpha/pi.
double cdkl_cost(double alpha);

/// sum_{k>=1} 2^k E(A 2^{-k}) until a term drops below tail_tol times the partial sum (or max_terms).
double asymptotic_tail(double a, double tail_tol = 1e-14, std::size_t max_terms = 4096);

/// [F(A) + tail(A)] / A for A in [pi/2^20, pi/2^19).
double asymptotic_bound(const EntanglementOptimizer &optimizer, double a, double tail_tol = 1e-14);

struct CurveRow {
    double alpha;
    double optimized;
    double cdkl;
};

std::vector<CurveRow> sweep_entanglement_curve(const EntanglementOptimizer &optimizer, std::span<const double> alphas);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

}  // namespace stator

#endif
