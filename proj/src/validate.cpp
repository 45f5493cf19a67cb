#include "sircov/validate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "sircov/conditional.hpp"
#include "sircov/coverage.hpp"
#include "sircov/distance.hpp"
#include "sircov/experiment.hpp"
#include "sircov/laplace.hpp"
#include "sircov/parallel.hpp"
#include "sircov/simulate.hpp"

namespace sircov {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

struct Tracker {
    bool pass = true;
    double worst = -std::numeric_limits<double>::infinity();
    std::string note;

    // records a bound check `value <= limit`, keeping the worst margin
    void bound(double value, double limit, const std::string& what) {
        if (value > worst) {
            worst = value;
            note = what;
        }
        if (value > limit)
            pass = false;
    }
};

// Shared state so expensive runs (simulations, analytic sweeps) are done once.
struct Context {
    ValidateLevel level;
    int threads;

    ModelConfig ppp = ModelConfig::ppp(1e-3, 4.0);
    ModelConfig mcp = ModelConfig::mcp(1e-3, 10.0, 4.0);

    std::vector<double> dbs;  // -10..20 step 1
    std::vector<double> ts;

    std::uint64_t mc_trials() const { return level == ValidateLevel::Full ? 100000 : 20000; }
    std::uint64_t ordering_trials() const {
        return level == ValidateLevel::Full ? 1000000 : 100000;
    }
    std::uint64_t oracle_draws() const {
        return level == ValidateLevel::Full ? 1000000 : 100000;
    }
    int oracle_tuples() const { return level == ValidateLevel::Full ? 50 : 10; }

    Context(ValidateLevel lv, int th) : level(lv), threads(th) {
        for (int db = -10; db <= 20; ++db) {
            dbs.push_back(db);
            ts.push_back(std::pow(10.0, db / 10.0));
        }
    }

    const ModelConfig& model(PointProcess kind) const {
        return kind == PointProcess::PPP ? ppp : mcp;
    }

    // normalized evaluators cached over the sweep's s range; the MCP side uses
    // the exact transform so simulation comparisons measure the simulator, not
    // the closed-form approximation (whose error is criterion 6's subject)
    std::shared_ptr<const LaplaceTransform> laplace(PointProcess kind) {
        auto& slot = kind == PointProcess::PPP ? lap_ppp_ : lap_mcp_;
        if (!slot) {
            LaplaceOptions opts;
            opts.threads = threads;
            opts.variant = LaplaceVariant::Exact;
            opts.s_max_hint = laplace_argument_bound(model(kind), ts.back());
            slot = make_laplace(model(kind), opts);
        }
        return slot;
    }

    // analytic coverage on the full dB grid, all six combos; computed once
    const std::array<std::vector<double>, kCombos>& analytic(PointProcess kind) {
        auto& slot = kind == PointProcess::PPP ? cov_ppp_ : cov_mcp_;
        if (!slot.has_value()) {
            slot.emplace();
            auto& table = *slot;
            const auto lap = laplace(kind);
            const ModelConfig& m = model(kind);
            for (auto& v : table)
                v.assign(ts.size(), 0.0);
            const std::size_t cells = kCombos * ts.size();
            parallel_chunks(cells, effective_threads(threads),
                            [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                                for (std::uint64_t i = begin; i < end; ++i) {
                                    const int combo = static_cast<int>(i / ts.size());
                                    const std::size_t ti = i % ts.size();
                                    table[combo][ti] =
                                        coverage(m, combo_scheme(combo), combo_role(combo),
                                                 SirThreshold::from_linear(ts[ti]), *lap)
                                            .value;
                                }
                            });
        }
        return *slot;
    }

    const SimulationResult& simulation(PointProcess kind) {
        auto& slot = kind == PointProcess::PPP ? sim_ppp_ : sim_mcp_;
        if (!slot.has_value()) {
            SimConfig cfg;
            cfg.model = model(kind);
            cfg.trials = mc_trials();
            cfg.master_seed = 20240901;
            cfg.t_grid = ts;
            cfg.threads = threads;
            slot = run_simulation(cfg);
        }
        return *slot;
    }

private:
    std::shared_ptr<const LaplaceTransform> lap_ppp_, lap_mcp_;
    std::optional<std::array<std::vector<double>, kCombos>> cov_ppp_, cov_mcp_;
    std::optional<SimulationResult> sim_ppp_, sim_mcp_;
};

CheckResult check_ordering_probabilities(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"1", "ordering probabilities (MC vs reference 0.84 / 0.79)", "", false, 0};

    SimConfig cfg;
    cfg.trials = ctx.ordering_trials();
    cfg.master_seed = 4242;
    cfg.threads = ctx.threads;

    cfg.model = ctx.ppp;
    const CoverageEstimate p_ppp = estimate_ordering_probability(cfg);
    cfg.model = ctx.mcp;
    const CoverageEstimate p_mcp = estimate_ordering_probability(cfg);

    const double err_ppp = std::fabs(p_ppp.value - 0.84);
    const double err_mcp = std::fabs(p_mcp.value - 0.79);
    out.pass = err_ppp <= 0.01 && err_mcp <= 0.01;
    out.seconds = seconds_since(t0);
    out.detail = "ppp " + fmt(p_ppp.value) + " (|d|=" + fmt(err_ppp, 2) + "), mcp " +
                 fmt(p_mcp.value) + " (|d|=" + fmt(err_mcp, 2) + "), " +
                 std::to_string(cfg.trials) + " trials, tol 0.01; runtime " +
                 fmt(out.seconds, 3) + " s (target 60 s)";
    return out;
}

CheckResult check_bound_chain(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"2", "ranking bound chain MSP-AD <= MSP <= ISP", "", false, 0};
    const double analytic_slack = 2e-4;

    Tracker tr;
    for (PointProcess kind : {PointProcess::PPP, PointProcess::MCP}) {
        const auto& cov = ctx.analytic(kind);
        for (std::size_t ti = 0; ti < ctx.ts.size(); ti += 2) {  // -10..20 step 2 dB
            for (UserRole role : {UserRole::Near, UserRole::Far}) {
                const double isp = cov[combo_index(RankingScheme::ISP, role)][ti];
                const double msp = cov[combo_index(RankingScheme::MSP, role)][ti];
                const double ad = cov[combo_index(RankingScheme::MSP_AD, role)][ti];
                const std::string at = std::string(to_string(kind)) + "/" +
                                       to_string(role) + "@" + fmt(ctx.dbs[ti], 3) + "dB";
                tr.bound(ad - msp, analytic_slack, "analytic ad-msp " + at);
                tr.bound(msp - isp, analytic_slack, "analytic msp-isp " + at);
            }
        }

        const SimulationResult& sim = ctx.simulation(kind);
        const double n = static_cast<double>(sim.trials);
        for (std::size_t ti = 0; ti < ctx.ts.size(); ti += 2) {
            for (UserRole role : {UserRole::Near, UserRole::Far}) {
                auto value = [&](RankingScheme s) {
                    return sim.coverage(s, role)[ti].value;
                };
                auto se2 = [&](double p) { return p * (1.0 - p) / n; };
                const double isp = value(RankingScheme::ISP);
                const double msp = value(RankingScheme::MSP);
                const double ad = value(RankingScheme::MSP_AD);
                const std::string at = std::string("mc ") + to_string(kind) + "/" +
                                       to_string(role) + "@" + fmt(ctx.dbs[ti], 3) + "dB";
                tr.bound(ad - msp, 3.0 * std::sqrt(se2(ad) + se2(msp)), "ad-msp " + at);
                tr.bound(msp - isp, 3.0 * std::sqrt(se2(msp) + se2(isp)), "msp-isp " + at);
            }
        }
    }

    out.pass = tr.pass;
    out.seconds = seconds_since(t0);
    out.detail = "worst violation margin " + fmt(tr.worst, 3) + " (" + tr.note +
                 "); analytic slack 2e-4, mc slack 3 combined s.e.; runtime " +
                 fmt(out.seconds, 3) +
                 " s incl. building the shared simulations and analytic tables";
    return out;
}

CheckResult check_oracle_equivalence(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"3", "conditional closed forms vs fading oracle", "", false, 0};

    const std::uint64_t draws = ctx.oracle_draws();
    const double tol = 3.0 / std::sqrt(static_cast<double>(draws));
    const int tuples = ctx.oracle_tuples();
    const double alphas[] = {3.0, 4.0, 6.0};

    Rng gen(987654321, 0);
    double worst = 0.0;
    std::string worst_at;
    bool pass = true;

    for (int i = 0; i < tuples; ++i) {
        const double r2 = 0.05 + 1.95 * gen.uniform();
        const double r1 = r2 * gen.uniform();
        const double alpha = alphas[gen.index(3)];
        const double t = 0.1 + 4.9 * gen.uniform();
        const double interference = gen.uniform();

        const OrderedDistancePair pair(r1, r2);
        const OracleResult oracle =
            fading_oracle(pair, alpha, t, interference, draws, 555000 + i);

        const ConstInterferenceLaplace laplace(interference);
        ConditionalCoverageInputs in;
        in.pair = pair;
        in.t = t;
        in.alpha = alpha;
        in.laplace = &laplace;

        for (int c = 0; c < kCombos; ++c) {
            const double closed = conditional_coverage(combo_scheme(c), combo_role(c), in);
            const double diff = std::fabs(closed - oracle.probability[c]);
            if (diff > worst) {
                worst = diff;
                worst_at = std::string(to_string(combo_scheme(c))) + "/" +
                           to_string(combo_role(c)) + " tuple " + std::to_string(i);
            }
            if (diff > tol)
                pass = false;
        }
    }

    out.pass = pass;
    out.seconds = seconds_since(t0);
    out.detail = std::to_string(tuples) + " tuples x 6 ops at " + std::to_string(draws) +
                 " draws; worst |closed-oracle| " + fmt(worst, 3) + " (" + worst_at +
                 "), tol " + fmt(tol, 3) + "; runtime " + fmt(out.seconds, 3) +
                 " s (target 300 s)";
    return out;
}

CheckResult check_mc_vs_analytic(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"4", "analytic vs simulation at benchmark parameters", "", false, 0};

    Tracker tr;
    for (PointProcess kind : {PointProcess::PPP, PointProcess::MCP}) {
        const auto& cov = ctx.analytic(kind);
        const SimulationResult& sim = ctx.simulation(kind);
        for (int c = 0; c < kCombos; ++c) {
            for (std::size_t ti = 0; ti < ctx.ts.size(); ++ti) {
                const CoverageEstimate& mc = sim.estimates[c][ti];
                const double gap = std::fabs(mc.value - cov[c][ti]);
                const double limit =
                    kind == PointProcess::MCP
                        ? std::max(0.02, 3.0 * mc.ci_halfwidth / 1.96)
                        : 0.05;
                tr.bound(gap, limit,
                         std::string(to_string(kind)) + " " + to_string(combo_scheme(c)) +
                             "/" + to_string(combo_role(c)) + "@" + fmt(ctx.dbs[ti], 3) +
                             "dB");
            }
        }
    }

    out.pass = tr.pass;
    out.seconds = seconds_since(t0);
    out.detail = "worst gap " + fmt(tr.worst, 3) + " (" + tr.note +
                 "); mcp tol max(0.02, 3 s.e.) against the exact transform, ppp tol 0.05; "
                 "runtime " +
                 fmt(out.seconds, 3) + " s on shared runs (target 600 s incl. them)";
    return out;
}

CheckResult check_scale_invariance(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"5", "scale invariance of analytic coverage", "", false, 0};
    const double tol = 2e-4;
    const double quad_tol = 5e-5;

    const std::vector<double> dbs = {-10.0, 0.0, 10.0};
    const std::vector<RankingScheme> schemes =
        ctx.level == ValidateLevel::Full
            ? std::vector<RankingScheme>{RankingScheme::ISP, RankingScheme::MSP,
                                         RankingScheme::MSP_AD}
            : std::vector<RankingScheme>{RankingScheme::ISP};

    Tracker tr;

    // PPP: explicit lambda_b all the way through (Table 1 forms, raw distances)
    {
        const double lambdas[2] = {1e-3, 1e-2};
        std::array<std::shared_ptr<const LaplaceTransform>, 2> lap;
        std::array<ModelConfig, 2> models = {ModelConfig::ppp(lambdas[0], 4.0),
                                             ModelConfig::ppp(lambdas[1], 4.0)};
        for (int k = 0; k < 2; ++k) {
            double s_hi = 0.0;
            for (double db : dbs)
                s_hi = std::max(s_hi, laplace_argument_bound_unnormalized(
                                          models[k], std::pow(10.0, db / 10.0)));
            lap[k] = make_cached(std::make_shared<PppLaplaceGeneral>(lambdas[k], 4.0),
                                 s_hi, 512, ctx.threads);
        }
        for (RankingScheme s : schemes)
            for (UserRole r : {UserRole::Near, UserRole::Far})
                for (double db : dbs) {
                    const SirThreshold t = SirThreshold::from_db(db);
                    const double a =
                        coverage_unnormalized(models[0], s, r, t, *lap[0], quad_tol).value;
                    const double b =
                        coverage_unnormalized(models[1], s, r, t, *lap[1], quad_tol).value;
                    tr.bound(std::fabs(a - b), tol,
                             std::string("ppp ") + to_string(s) + "/" + to_string(r) + "@" +
                                 fmt(db, 3) + "dB");
                }
    }

    // MCP: (lambda_b, R) and (lambda_b/4, 2R) share lambda_b R^2
    {
        std::array<ModelConfig, 2> models = {ModelConfig::mcp(1e-3, 10.0, 4.0),
                                             ModelConfig::mcp(2.5e-4, 20.0, 4.0)};
        std::array<std::shared_ptr<const LaplaceTransform>, 2> lap;
        for (int k = 0; k < 2; ++k) {
            double s_hi = 0.0;
            for (double db : dbs)
                s_hi = std::max(s_hi, laplace_argument_bound_unnormalized(
                                          models[k], std::pow(10.0, db / 10.0)));
            lap[k] = make_cached(
                std::make_shared<McpLaplaceExactGeneral>(models[k].lambda_b,
                                                         models[k].cluster_radius, 4.0),
                s_hi, 512, ctx.threads);
        }
        for (RankingScheme s : schemes)
            for (UserRole r : {UserRole::Near, UserRole::Far})
                for (double db : dbs) {
                    const SirThreshold t = SirThreshold::from_db(db);
                    const double a =
                        coverage_unnormalized(models[0], s, r, t, *lap[0], quad_tol).value;
                    const double b =
                        coverage_unnormalized(models[1], s, r, t, *lap[1], quad_tol).value;
                    tr.bound(std::fabs(a - b), tol,
                             std::string("mcp ") + to_string(s) + "/" + to_string(r) + "@" +
                                 fmt(db, 3) + "dB");
                }
    }

    out.pass = tr.pass;
    out.seconds = seconds_since(t0);
    out.detail = "worst |difference| " + fmt(tr.worst, 3) + " (" + tr.note + "), tol 2e-4" +
                 "; runtime " + fmt(out.seconds, 3) + " s";
    return out;
}

CheckResult check_closed_form_accuracy(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"6", "small-scale closed form vs exact MCP Laplace", "", false, 0};

    const McpLaplaceExact exact(0.1, 4.0);
    const McpLaplaceApprox approx(0.1, 4.0);

    double worst = 0.0, worst_s = 0.0;
    const int points = 33;
    std::vector<double> gaps(points);
    parallel_chunks(points, effective_threads(ctx.threads),
                    [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                        for (std::uint64_t i = begin; i < end; ++i) {
                            const double s =
                                std::pow(10.0, -2.0 + 4.0 * static_cast<double>(i) /
                                                           (points - 1));
                            gaps[i] = std::fabs(exact(s) - approx(s));
                        }
                    });
    for (int i = 0; i < points; ++i) {
        if (gaps[i] > worst) {
            worst = gaps[i];
            worst_s = std::pow(10.0, -2.0 + 4.0 * i / double(points - 1));
        }
    }

    const double hand = approx(1.0);
    const double hand_err = std::fabs(hand - 0.47700);

    out.pass = worst <= 0.02 && hand_err <= 1e-5;
    out.seconds = seconds_since(t0);
    out.detail = "sup |exact-approx| " + fmt(worst, 3) + " at s=" + fmt(worst_s, 3) +
                 " (tol 0.02); closed form L(1)=" + fmt(hand, 6) +
                 " vs 0.47700 (|d|=" + fmt(hand_err, 2) + ", tol 1e-5); runtime " +
                 fmt(out.seconds, 3) + " s";
    return out;
}

CheckResult check_limits_and_continuity(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"7", "trivial limits, continuity at T=1, monotonicity", "", false, 0};

    // coverage at -40 dB within 1e-3 of its T -> 0 limit: 1 for ISP and MSP,
    // the ordering probability for the after-decoding scheme (whose success
    // event includes the near-user-is-stronger condition at every T)
    Tracker limits_ppp, limits_mcp;
    for (PointProcess kind : {PointProcess::PPP, PointProcess::MCP}) {
        Tracker& tr = kind == PointProcess::PPP ? limits_ppp : limits_mcp;
        const auto lap = ctx.laplace(kind);
        const double ordering = ordering_probability_analytic(ctx.model(kind));
        for (int c = 0; c < kCombos; ++c) {
            const double v = coverage(ctx.model(kind), combo_scheme(c), combo_role(c),
                                      SirThreshold::from_db(-40.0), *lap)
                                 .value;
            const double limit =
                combo_scheme(c) == RankingScheme::MSP_AD ? ordering : 1.0;
            tr.bound(std::fabs(limit - v), 1e-3,
                     std::string(to_string(combo_scheme(c))) + "/" +
                         to_string(combo_role(c)));
        }
    }

    // conditional continuity across T = 1
    Tracker continuity;
    for (PointProcess kind : {PointProcess::PPP, PointProcess::MCP}) {
        const auto lap = ctx.laplace(kind);
        Rng gen(1357, 0);
        const double ub = kind == PointProcess::PPP ? 3.8 : 1.0;
        for (int i = 0; i < 16; ++i) {
            const double r2 = ub * (0.1 + 0.9 * gen.uniform());
            const double r1 = r2 * gen.uniform();
            ConditionalCoverageInputs in;
            in.pair = OrderedDistancePair(r1, r2);
            in.alpha = 4.0;
            in.laplace = lap.get();
            for (int c = 0; c < kCombos; ++c) {
                in.t = 1.0 - 1e-11;
                const double lo = conditional_coverage(combo_scheme(c), combo_role(c), in);
                in.t = 1.0 + 1e-11;
                const double hi = conditional_coverage(combo_scheme(c), combo_role(c), in);
                continuity.bound(std::fabs(hi - lo), 1e-9,
                                 std::string(to_string(kind)) + " " +
                                     to_string(combo_scheme(c)));
            }
        }
    }

    // range and monotonicity of the full analytic tables; MC curves are
    // nested by construction so zero slack there
    Tracker shape;
    for (PointProcess kind : {PointProcess::PPP, PointProcess::MCP}) {
        const auto& cov = ctx.analytic(kind);
        const SimulationResult& sim = ctx.simulation(kind);
        for (int c = 0; c < kCombos; ++c) {
            for (std::size_t ti = 0; ti < ctx.ts.size(); ++ti) {
                shape.bound(-cov[c][ti], 0.0, "analytic value < 0");
                shape.bound(cov[c][ti] - 1.0, 1e-12, "analytic value > 1");
                if (ti > 0) {
                    shape.bound(cov[c][ti] - cov[c][ti - 1], 2e-4,
                                std::string("analytic increase ") + to_string(kind));
                    shape.bound(static_cast<double>(sim.success_counts[c][ti]) -
                                    static_cast<double>(sim.success_counts[c][ti - 1]),
                                0.0, "mc count increase");
                }
            }
        }
    }

    out.pass = limits_ppp.pass && limits_mcp.pass && continuity.pass && shape.pass;
    out.seconds = seconds_since(t0);
    out.detail = std::string("-40dB limits vs tol 1e-3: ppp worst ") +
                 fmt(limits_ppp.worst, 3) + " (" + limits_ppp.note + "), mcp worst " +
                 fmt(limits_mcp.worst, 3) + " (" + limits_mcp.note +
                 "); continuity worst " + fmt(continuity.worst, 2) +
                 " (tol 1e-9); shape worst " + fmt(shape.worst, 2) +
                 "; runtime " + fmt(out.seconds, 3) + " s";
    return out;
}

CheckResult check_determinism(Context& ctx) {
    const auto t0 = Clock::now();
    CheckResult out{"8", "byte-identical CSV under 1 and N threads", "", false, 0};

    ExperimentSpec spec;
    spec.model = ctx.mcp;
    spec.engine = Engine::Both;
    spec.t_db_step = 5.0;
    spec.mc_trials = ctx.level == ValidateLevel::Full ? 20000 : 5000;
    spec.mc_seed = 77;

    spec.threads = 1;
    const std::string csv_single = run_sweep(spec).csv;
    spec.threads = static_cast<int>(effective_threads(0)) + 1;
    const std::string csv_multi = run_sweep(spec).csv;
    const std::string csv_again = run_sweep(spec).csv;

    out.pass = csv_single == csv_multi && csv_multi == csv_again;
    out.seconds = seconds_since(t0);
    out.detail = std::string(out.pass ? "identical" : "MISMATCH") + " across 1 thread, " +
                 std::to_string(spec.threads) + " threads, and rerun (" +
                 std::to_string(csv_single.size()) + " bytes); runtime " +
                 fmt(out.seconds, 3) + " s";
    return out;
}

}  // namespace

bool ValidationReport::all_pass() const {
    for (const CheckResult& c : checks)
        if (!c.pass)
            return false;
    return true;
}

std::string ValidationReport::to_csv() const {
    std::ostringstream os;
    os << "# sircov-validate v1\n";
    os << "id,name,pass,seconds,detail\n";
    for (const CheckResult& c : checks) {
        std::string detail = c.detail;
        for (char& ch : detail)
            if (ch == ',')
                ch = ';';
        os << c.id << ',' << c.name << ',' << (c.pass ? 1 : 0) << ',' << fmt(c.seconds, 3)
           << ',' << detail << '\n';
    }
    return os.str();
}

ValidationReport run_validation(ValidateLevel level, int threads) {
    Context ctx(level, threads);
    ValidationReport report;

    report.checks.push_back(check_ordering_probabilities(ctx));
    report.checks.push_back(check_bound_chain(ctx));
    report.checks.push_back(check_oracle_equivalence(ctx));
    report.checks.push_back(check_mc_vs_analytic(ctx));
    report.checks.push_back(check_scale_invariance(ctx));
    report.checks.push_back(check_closed_form_accuracy(ctx));
    report.checks.push_back(check_limits_and_continuity(ctx));
    report.checks.push_back(check_determinism(ctx));
    return report;
}

}  // namespace sircov
