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

// stator: command-line driver.
//
//   stator curves    --out DIR [--format csv|json] [--alpha-min A --alpha-max B --points N]
//   stator optimize  --alpha A
//   stator simulate  --alpha A [--runs R --parties N --schedule cdkl|optimized|deterministic --exhaustive]
//   stator compile   --hamiltonian FILE [--exact]
//   stator general   (--theta X,Y,Z | --family NAME --param A [--param2 B]) [--parties N --policy iterate|teleport]
//   stator verify
//
// Exit codes: 0 ok, 2 validation failure, 3 invariant violation.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "output.hpp"
#include "stator/comm_analysis.hpp"
#include "stator/cost_optimizer.hpp"
#include "stator/entropy.hpp"
#include "stator/error.hpp"
#include "stator/general_unitary.hpp"
#include "stator/ham_compiler.hpp"
#include "stator/hamiltonian_io.hpp"
#include "stator/random.hpp"
#include "stator/stage_protocol.hpp"

using namespace stator;
using namespace stator_cli;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
    double alpha_min = 1e-6;
    double alpha_max = kPi / 4;
    std::size_t points = 64;
    std::size_t stages = 25;
    double delta = kDefaultDelta;
    double epsilon = kDefaultEpsilon;
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App *sub, RunConfig &cfg) {
    sub->add_option("--alpha-min", cfg.alpha_min, "Smallest angle of a sweep")->capture_default_str();
    sub->add_option("--alpha-max", cfg.alpha_max, "Largest angle of a sweep")->capture_default_str();
    sub->add_option("--points", cfg.points, "Log-spaced sweep points")->capture_default_str();
    sub->add_option("--stages", cfg.stages, "Maximum stages L")->capture_default_str();
    sub->add_option("--delta", cfg.delta, "Typical-set slack")->capture_default_str();
    sub->add_option("--epsilon", cfg.epsilon, "Allowed infidelity")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output file (directory for curves)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void check_common(const RunConfig &cfg) {
    if (!(cfg.alpha_min > 0.0) || !(cfg.alpha_max >= cfg.alpha_min) || !std::isfinite(cfg.alpha_max)) {
        throw ValidationError("need 0 < alpha-min <= alpha-max");
    }
    if (cfg.points < 2) {
        throw ValidationError("points must be at least 2");
    }
    if (cfg.stages < 1) {
        throw ValidationError("stages must be at least 1");
    }
    if (!(cfg.delta >= 0.0) || !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw ValidationError("need delta >= 0 and 0 < epsilon < 1");
    }
}

EntanglementOptimizer make_optimizer(const RunConfig &cfg) {
    OptimizerConfig oc;
    oc.max_stages = cfg.stages;
    return EntanglementOptimizer(oc);
}

void emit(const RunConfig &cfg, const json &doc) {
    if (cfg.format != "json") {
        throw ValidationError("csv output is only available for curves");
    }
    if (cfg.out.empty()) {
        std::cout << dump(doc);
    } else {
        write_file(cfg.out, dump(doc));
    }
}

const char *kind_name(StageKind k) {
    switch (k) {
        case StageKind::kProbabilistic:
            return "probabilistic";
        case StageKind::kDeterministic:
            return "deterministic";
        case StageKind::kLocal:
            return "local";
    }
    return "?";
}

json schedule_json(const CostProfile &profile) {
    json stages = json::array();
    for (std::size_t i = 0; i < profile.schedule.stages.size(); i++) {
        const auto &s = profile.schedule.stages[i];
        double ebits = s.kind == StageKind::kProbabilistic ? resource_entanglement(s.beta)
                       : s.kind == StageKind::kDeterministic ? 1.0
                                                              : 0.0;
        stages.push_back({
            {"index", s.stage_index},
            {"kind", kind_name(s.kind)},
            {"alpha", num(s.alpha)},
            {"beta", num(s.beta)},
            {"gamma", num(s.gamma)},
            {"ebits", num(ebits)},
            {"reach_probability", num(i < profile.stage_reach_probs.size() ? profile.stage_reach_probs[i] : 0.0)},
            {"success_probability",
             num(i < profile.stage_success_probs.size() ? profile.stage_success_probs[i] : 0.0)},
        });
    }
    return stages;
}

// ---------------------------------------------------------------- curves

int cmd_curves(const RunConfig &cfg, std::size_t bound_points) {
    check_common(cfg);
    if (cfg.out.empty()) {
        throw ValidationError("curves needs --out DIR");
    }
    if (bound_points < 2) {
        throw ValidationError("bound-points must be at least 2");
    }
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec || !std::filesystem::is_directory(cfg.out)) {
        throw std::runtime_error("cannot create output directory " + cfg.out);
    }

    EntanglementOptimizer opt = make_optimizer(cfg);
    std::vector<double> alphas = log_spaced(cfg.alpha_min, cfg.alpha_max, cfg.points);

    Table fig1{{"alpha", "optimized", "cdkl"}, {}};
    bool dominance = true;
    for (const auto &row : sweep_entanglement_curve(opt, alphas)) {
        fig1.rows.push_back({row.alpha, row.optimized, row.cdkl});
        dominance = dominance && row.optimized <= row.cdkl + 1e-12;
    }

    Table fig2{{"A", "bound_minus_5.6418"}, {}};
    const double lo = kPi / std::ldexp(1.0, 20), hi = kPi / std::ldexp(1.0, 19);
    double worst = -1.0;
    for (std::size_t i = 0; i < bound_points; i++) {
        double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bound_points);
        double excess = asymptotic_bound(opt, a) - kOptimizedEbitsPerRadian;
        worst = std::max(worst, excess);
        fig2.rows.push_back({a, excess});
    }

    Table fig3{{"alpha", "leader_bits", "comm_opt_ebits", "ent_opt_ebits", "ent_opt_leader_bits"}, {}};
    Table fig4{{"alpha", "leader_bits_over_alpha"}, {}};
    for (double a : alphas) {
        LeaderCommOptimum c = optimize_leader_comm(a, cfg.delta, cfg.epsilon);
        CostProfile ent = opt.optimize_schedule(a);
        double leader = c.profile.leader_bits_rate;
        fig3.rows.push_back(
            {a, leader, c.ebits, ent.expected_ebits, leader_comm_rate(ent, LeaderMode::kUncompressed)});
        fig4.rows.push_back({a, leader / a});
    }

    json files = json::array();
    auto write = [&](const std::string &name, const Table &t) {
        std::string path = (std::filesystem::path(cfg.out) / (name + "." + cfg.format)).string();
        write_file(path, cfg.format == "csv" ? to_csv(t) : dump(to_json(t, "stator.curve.v1", name)));
        files.push_back(path);
    };
    write("fig1", fig1);
    write("fig2", fig2);
    write("fig3", fig3);
    write("fig4", fig4);

    json summary = {
        {"schema", "stator.curves.v1"},
        {"files", files},
        {"points", cfg.points},
        {"bound_points", bound_points},
        {"fig1_optimized_le_cdkl", dominance},
        {"fig2_max_excess", num(worst)},
        {"tables_built", opt.tables_built()},
    };
    std::cout << dump(summary);
    return kExitOk;
}

// ---------------------------------------------------------------- optimize

int cmd_optimize(const RunConfig &cfg, double alpha) {
    check_common(cfg);
    if (!std::isfinite(alpha)) {
        throw ValidationError("alpha must be finite");
    }
    EntanglementOptimizer opt = make_optimizer(cfg);
    CostProfile p = opt.optimize_schedule(alpha);
    CommProfile comm = comm_profile(p, cfg.delta, cfg.epsilon);
    double r = reduce_angle(alpha);
    json doc = {
        {"schema", "stator.optimize.v1"},
        {"alpha", num(alpha)},
        {"reduced_alpha", num(r)},
        {"expected_ebits", num(p.expected_ebits)},
        {"ebits_per_radian", r > 0.0 ? num(p.expected_ebits / r) : json(nullptr)},
        {"cdkl_ebits", num(cdkl_cost(r))},
        {"stages", schedule_json(p)},
        {"leader_bits", num(p.expected_bits_leader)},
        {"worker_bits", num(p.expected_bits_worker)},
        {"comm",
         {
             {"delta", num(comm.delta)},
             {"epsilon", num(comm.epsilon)},
             {"worker_rate", num(comm.worker_bits_rate)},
             {"leader_rate", num(comm.leader_bits_rate)},
             {"leader_rate_entropy_bound", num(leader_comm_rate(p, LeaderMode::kEntropyBound))},
         }},
    };
    emit(cfg, doc);
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

StateVector random_state(const Dims &dims, Rng &rng) {
    auto n = static_cast<Eigen::Index>(joint_dimension(dims));
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; i++) {
        double re = rng.normal();
        double im = rng.normal();
        v[i] = Complex(re, im);
    }
    return StateVector::normalized(dims, std::move(v));
}

int cmd_simulate(const RunConfig &cfg, double alpha, std::size_t runs, std::size_t parties, const std::string &kind,
                 bool exhaustive) {
    check_common(cfg);
    if (!std::isfinite(alpha)) {
        throw ValidationError("alpha must be finite");
    }
    if (runs < 1) {
        throw ValidationError("runs must be at least 1");
    }
    if (parties < 2 || parties > 10) {
        throw ValidationError("parties must be between 2 and 10");
    }
    StageSchedule schedule;
    if (kind == "cdkl") {
        schedule = cdkl_schedule(alpha, cfg.stages);
    } else if (kind == "deterministic") {
        schedule = deterministic_schedule(alpha);
    } else {
        schedule = make_optimizer(cfg).optimize_schedule(alpha).schedule;
    }
    CostProfile analytic = expected_cost(schedule);
    const double tolerance = 1e-8;

    json doc = {
        {"schema", "stator.simulate.v1"},
        {"alpha", num(alpha)},
        {"parties", parties},
        {"schedule", kind},
        {"seed", cfg.seed},
        {"stages", schedule_json(analytic)},
        {"analytic_ebits", num(analytic.expected_ebits)},
        {"analytic_leader_bits", num(analytic.expected_bits_leader)},
        {"analytic_worker_bits", num(analytic.expected_bits_worker)},
    };

    double max_distance = 0.0;
    if (exhaustive) {
        const double patterns = std::pow(2.0, static_cast<double>(parties - 1));
        if (std::pow(2.0 * patterns, static_cast<double>(schedule.stages.size())) > 1 << 22) {
            throw ValidationError("branch tree too large for --exhaustive; lower --stages or --parties");
        }
        LeafSummary s = enumerate_protocol_leaves(schedule, parties);
        max_distance = s.max_distance;
        doc["mode"] = "exhaustive";
        doc["leaves"] = s.leaves;
        doc["total_probability"] = num(s.total_probability);
        doc["mean_ebits"] = num(s.expected_ebits);
        doc["mean_leader_bits"] = num(s.expected_leader_bits);
    } else {
        Rng rng(cfg.seed);
        Dims dims(parties, 2);
        const OperatorMatrix target = gates::collective_z_rotation(alpha, parties);
        std::vector<std::size_t> reached(schedule.stages.size(), 0), succeeded(schedule.stages.size(), 0);
        double sum = 0.0, sum_sq = 0.0, leader = 0.0, worker = 0.0;
        for (std::size_t r = 0; r < runs; r++) {
            Rng state_rng = rng.split();
            Rng outcome_rng = rng.split();
            StateVector input = random_state(dims, state_rng);
            SampledOutcomes source(outcome_rng);
            Transcript t = run_protocol(alpha, schedule, input, source);
            for (std::size_t i = 0; i < t.outcomes.size(); i++) {
                reached[i]++;
                succeeded[i] += t.outcomes[i].branch == Branch::kSuccess ? 1 : 0;
            }
            sum += t.ebits_consumed;
            sum_sq += t.ebits_consumed * t.ebits_consumed;
            leader += static_cast<double>(t.bits_from_leader);
            worker += t.bits_from_workers.empty() ? 0.0 : static_cast<double>(t.bits_from_workers[0]);
            max_distance = std::max(max_distance, op_distance_phase_invariant(t.net_operator, target));
        }
        const double n = static_cast<double>(runs);
        const double mean = sum / n;
        const double var = std::max(0.0, sum_sq / n - mean * mean);
        const double stderr_mean = std::sqrt(var / n);
        json rates = json::array();
        for (std::size_t i = 0; i < reached.size(); i++) {
            rates.push_back({
                {"stage", i + 1},
                {"reached", reached[i]},
                {"succeeded", succeeded[i]},
                {"success_rate", reached[i] ? num(static_cast<double>(succeeded[i]) / static_cast<double>(reached[i]))
                                            : json(nullptr)},
            });
        }
        doc["mode"] = "monte_carlo";
        doc["runs"] = runs;
        doc["stage_statistics"] = rates;
        doc["mean_ebits"] = num(mean);
        doc["ebits_standard_error"] = num(stderr_mean);
        doc["ebits_z_score"] = stderr_mean > 0.0 ? num((mean - analytic.expected_ebits) / stderr_mean) : num(0.0);
        doc["mean_leader_bits"] = num(leader / n);
        doc["mean_worker_bits"] = num(worker / n);
    }
    doc["max_operator_distance"] = num(max_distance);
    doc["passed"] = max_distance <= tolerance;
    emit(cfg, doc);
    if (max_distance > tolerance) {
        return kExitInvariant;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- compile

json primitive_json(const Primitive &p) {
    json out = {{"type", primitive_name(p)}};
    if (const auto *a = std::get_if<AncillaPrep>(&p)) {
        out["party"] = a->party;
        out["dim"] = a->dim;
    } else if (const auto *l = std::get_if<LocalLayer>(&p)) {
        out["party"] = l->party;
        out["op"] = complex_matrix(l->op);
    } else if (const auto *z = std::get_if<ZZRotation>(&p)) {
        out["angle"] = num(z->angle);
    } else if (const auto *s = std::get_if<SubspaceRestrict>(&p)) {
        out["party"] = s->party;
    }
    return out;
}

int cmd_compile(const RunConfig &cfg, const std::string &path, bool exact, std::size_t slices) {
    if (path.empty()) {
        throw ValidationError("compile needs --hamiltonian FILE");
    }
    HamiltonianSpec spec = load_hamiltonian(path);
    if (slices > 0) {
        spec.slices = slices;
    }
    CompiledSchedule schedule = compile_sum(spec);
    CompileVerification v = verify_schedule(schedule, spec);

    json prims = json::array();
    for (const auto &p : schedule.primitives) {
        prims.push_back(primitive_json(p));
    }
    json exact_cost = nullptr;
    if (exact) {
        EntanglementOptimizer opt = make_optimizer(cfg);
        exact_cost = num(cost_estimate(schedule, CostMode::kExact, &opt));
    }
    const bool single = spec.terms.size() == 1;
    const bool passed = v.leakage < 1e-10 && (!single || v.operator_distance < 1e-8);
    json doc = {
        {"schema", "stator.compile.v1"},
        {"system_dims", schedule.system_dims},
        {"terms", schedule.terms},
        {"slices", schedule.slices},
        {"time", num(spec.time)},
        {"convention", spec.convention == TimeConvention::kPlusI ? "plus" : "minus"},
        {"primitives", prims},
        {"rotation_count", rotation_count(schedule)},
        {"swap_layer_count", swap_layer_count(schedule)},
        {"no_interior_events", schedule.no_interior_events},
        {"total_angle", num(schedule.total_angle)},
        {"linear_ebits", num(cost_estimate(schedule, CostMode::kLinear))},
        {"exact_ebits", exact_cost},
        {"verification",
         {
             {"operator_distance", num(v.operator_distance)},
             {"leakage", num(v.leakage)},
             {"exact_expected", single},
             {"passed", passed},
         }},
    };
    emit(cfg, doc);
    return passed ? kExitOk : kExitInvariant;
}

// ---------------------------------------------------------------- general

int cmd_general(const RunConfig &cfg, const std::vector<double> &theta, const std::string &family, double param,
                double param2, std::size_t parties, const std::string &policy) {
    TensorDecomposition decomp;
    std::string name;
    if (!theta.empty()) {
        if (theta.size() != 3 || !family.empty()) {
            throw ValidationError("--theta takes three values and excludes --family");
        }
        decomp = canonical_two_qubit(theta[0], theta[1], theta[2]);
        name = "canonical_two_qubit";
    } else if (family == "collective-z") {
        decomp = collective_z_family(param, parties);
        name = family;
    } else if (family == "zzz-zzi") {
        decomp = qubit_zzz_zzi_family(param, param2);
        name = family;
    } else if (family == "qutrit-clock") {
        decomp = qutrit_clock_family(param, parties);
        name = family;
    } else {
        throw ValidationError("need --theta or --family collective-z|zzz-zzi|qutrit-clock");
    }
    ResourceDesign design = design_resource(decomp, DesignPolicy::kSqrt);
    PatternCheck check = check_all_patterns(decomp, design);
    FailureCostReport cost =
        failure_policy_cost(decomp, design, policy == "iterate" ? FailurePolicy::kIterate : FailurePolicy::kTeleport);

    json lambdas = json::array();
    for (Complex l : decomp.lambdas) {
        lambdas.push_back({num(l.real()), num(l.imag())});
    }
    json rounds = json::array();
    for (const auto &r : cost.rounds) {
        rounds.push_back({{"success_probability", num(r.success_probability)}, {"ebits", num(r.ebits)}});
    }
    const bool passed = check.max_distance < 1e-9;
    json doc = {
        {"schema", "stator.general.v1"},
        {"family", name},
        {"parties", decomp.parties()},
        {"system_dims", decomp.system_dims()},
        {"lambda", lambdas},
        {"mu", complex_vector(design.mu)},
        {"nu", complex_vector(design.nu)},
        {"resource_ebits", num(design_entanglement(design))},
        {"success_probability", num(average_success_probability(decomp, design))},
        {"pattern_check",
         {{"patterns", check.patterns}, {"max_distance", num(check.max_distance)}, {"passed", passed}}},
        {"failure_policy",
         {
             {"policy", policy},
             {"failure_probability", num(cost.failure_probability)},
             {"first_round_ebits", num(cost.first_round_ebits)},
             {"fallback_ebits", num(cost.fallback_ebits)},
             {"fallback_bits", num(cost.fallback_bits)},
             {"expected_ebits", num(cost.expected_ebits)},
             {"rounds", rounds},
         }},
    };
    emit(cfg, doc);
    return passed ? kExitOk : kExitInvariant;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig &cfg) {
    check_common(cfg);
    json checks = json::array();
    bool all = true;
    auto record = [&](const std::string &name, double value, bool ok) {
        checks.push_back({{"name", name}, {"value", num(value)}, {"passed", ok}});
        all = all && ok;
    };

    Rng rng(cfg.seed);
    for (std::size_t parties : {2, 3}) {
        double worst = 0.0;
        for (int i = 0; i < 3; i++) {
            double alpha = (rng.uniform() - 0.5) * kPi;
            worst = std::max(worst, enumerate_protocol_leaves(cdkl_schedule(alpha, 6), parties).max_distance);
        }
        record("leaf_exactness_n" + std::to_string(parties), worst, worst < 1e-10);
    }

    {
        double worst = 0.0;
        for (int i = 0; i < 8; i++) {
            double alpha = (rng.uniform() - 0.5) * kPi / 2;
            double beta = rng.uniform() * kPi / 2;
            StageParams sp = probabilistic_stage(alpha, beta, 1);
            double c = std::cos(sp.beta), s = std::sin(sp.beta), cg = std::cos(sp.gamma), sg = std::sin(sp.gamma);
            worst = std::max(worst, std::abs(success_probability(sp) - (c * c * cg * cg + s * s * sg * sg)));
        }
        record("stage_success_probability", worst, worst < 1e-12);
    }

    {
        Eigen::MatrixXcd x = gates::pauli_x();
        HamiltonianSpec spec;
        spec.terms.push_back({{x, x}});
        spec.time = 0.5;
        CompileVerification v = verify_schedule(compile(spec), spec);
        record("compile_xx_distance", v.operator_distance, v.operator_distance < 1e-8);
        record("compile_xx_leakage", v.leakage, v.leakage < 1e-10);
    }

    {
        TensorDecomposition d = canonical_two_qubit(0.3, 0.2, 0.1);
        PatternCheck c = check_all_patterns(d, design_resource(d, DesignPolicy::kSqrt));
        record("general_canonical_patterns", c.max_distance, c.max_distance < 1e-9);
    }

    {
        const std::size_t m = 16;
        const double p = 0.11, delta = 0.1;
        TypicalSetReport t = typical_set(m, p, delta);
        double bound = std::exp2(static_cast<double>(m) * (binary_entropy(p) + delta));
        record("typical_set_size_bound", static_cast<double>(t.set_size), static_cast<double>(t.set_size) <= bound);
    }

    {
        CostProfile p = expected_cost(cdkl_schedule(0.1, cfg.stages));
        WorkerRate w = worker_comm_rate(p, 0.0);
        double nonterminal = 0.0;
        for (std::size_t i = 0; i < p.schedule.stages.size(); i++) {
            if (p.schedule.stages[i].kind == StageKind::kProbabilistic) {
                nonterminal += p.stage_reach_probs[i] * resource_entanglement(p.schedule.stages[i].beta);
            }
        }
        double gap = std::abs(w.compressed - nonterminal);
        record("worker_rate_delta_zero", gap, gap < 1e-10);
    }

    {
        double c = cdkl_dyadic_cost(24) / (kPi / std::ldexp(1.0, 24));
        record("cdkl_constant", c, std::abs(c - 5.9793) <= 1e-3);
    }

    json doc = {{"schema", "stator.verify.v1"}, {"seed", cfg.seed}, {"checks", checks}, {"passed", all}};
    emit(cfg, doc);
    return all ? kExitOk : kExitInvariant;
}

json error_json(const std::string &kind, const std::string &message) {
    return {{"schema", "stator.error.v1"}, {"error", kind}, {"message", message}};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multipartite collective-phase protocols: costs, simulation, compilation"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto *curves = app.add_subcommand("curves", "Write fig1-fig4 data");
    add_common(curves, cfg);
    std::size_t bound_points = 512;
    curves->add_option("--bound-points", bound_points, "Grid points for the asymptotic bound")->capture_default_str();

    auto *optimize = app.add_subcommand("optimize", "Entanglement-optimized schedule for one angle");
    add_common(optimize, cfg);
    double alpha = 0.0;
    optimize->add_option("--alpha", alpha, "Rotation angle")->required();

    auto *simulate = app.add_subcommand("simulate", "Run the protocol");
    add_common(simulate, cfg);
    std::size_t runs = 10000, parties = 2;
    std::string schedule_kind = "cdkl";
    bool exhaustive = false;
    simulate->add_option("--alpha", alpha, "Rotation angle")->required();
    simulate->add_option("--runs", runs, "Monte Carlo runs")->capture_default_str();
    simulate->add_option("--parties", parties, "Number of parties N")->capture_default_str();
    simulate->add_option("--schedule", schedule_kind, "cdkl, optimized or deterministic")
        ->check(CLI::IsMember({"cdkl", "optimized", "deterministic"}))
        ->capture_default_str();
    simulate->add_flag("--exhaustive", exhaustive, "Enumerate every branch instead of sampling");

    auto *compile_cmd = app.add_subcommand("compile", "Compile a Hamiltonian evolution");
    add_common(compile_cmd, cfg);
    std::string ham_path;
    bool exact = false;
    std::size_t slices = 0;
    compile_cmd->add_option("--hamiltonian", ham_path, "Hamiltonian JSON file")->required();
    compile_cmd->add_flag("--exact", exact, "Also report the optimized per-rotation cost");
    compile_cmd->add_option("--slices", slices, "Override the file's slice count");

    auto *general = app.add_subcommand("general", "General multipartite unitary protocol");
    add_common(general, cfg);
    std::vector<double> theta;
    std::string family, policy = "teleport";
    double param = 0.0, param2 = 0.0;
    std::size_t gparties = 3;
    general->add_option("--theta", theta, "Canonical two-qubit parameters x,y,z")->delimiter(',');
    general->add_option("--family", family, "collective-z, zzz-zzi or qutrit-clock");
    general->add_option("--param", param, "Family parameter");
    general->add_option("--param2", param2, "Second family parameter (zzz-zzi)");
    general->add_option("--parties", gparties, "Parties for collective-z and qutrit-clock")->capture_default_str();
    general->add_option("--policy", policy, "iterate or teleport")
        ->check(CLI::IsMember({"iterate", "teleport"}))
        ->capture_default_str();

    auto *verify = app.add_subcommand("verify", "Quick invariant suite");
    add_common(verify, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cout << dump(error_json("usage", e.what()));
        return kExitValidation;
    }

    try {
        if (*curves) {
            return cmd_curves(cfg, bound_points);
        }
        if (*optimize) {
            return cmd_optimize(cfg, alpha);
        }
        if (*simulate) {
            return cmd_simulate(cfg, alpha, runs, parties, schedule_kind, exhaustive);
        }
        if (*compile_cmd) {
            return cmd_compile(cfg, ham_path, exact, slices);
        }
        if (*general) {
            return cmd_general(cfg, theta, family, param, param2, gparties, policy);
        }
        if (*verify) {
            return cmd_verify(cfg);
        }
    } catch (const ValidationError &e) {
        std::cout << dump(error_json("validation", e.what()));
        return kExitValidation;
    } catch (const DimensionError &e) {
        std::cout << dump(error_json("dimension", e.what()));
        return kExitValidation;
    } catch (const InvariantViolation &e) {
        std::cout << dump(error_json("invariant", e.what()));
        return kExitInvariant;
    } catch (const ZeroProbabilityError &e) {
        std::cout << dump(error_json("zero_probability", e.what()));
        return kExitInvariant;
    } catch (const std::exception &e) {
        std::cout << dump(error_json("io", e.what()));
        return kExitValidation;
    }
    return kExitOk;
}
