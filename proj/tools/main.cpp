// sircov - SIR coverage for 2-user uplink NOMA under ISP/MSP user ranking:
// analytic sweeps, a ground-truth network simulator, and a validation suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sircov/conditional.hpp"
#include "sircov/coverage.hpp"
#include "sircov/experiment.hpp"
#include "sircov/simulate.hpp"
#include "sircov/validate.hpp"

namespace {

using namespace sircov;

struct CommonFlags {
    std::string config_path;
    std::string model_kind;
    double lambda_b = -1.0;
    double lambda_u = -1.0;
    double cluster_radius = -1.0;
    double alpha = -1.0;
    double t_db_min = std::nan("");
    double t_db_max = std::nan("");
    double t_db_step = std::nan("");
    std::string schemes, roles, laplace;
    std::uint64_t trials = 0;
    std::int64_t seed = -1;
    double window = -1.0;
    int threads = -1;
    double quad_tol = -1.0;
    std::string output;
    bool timing = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("-c,--config", f.config_path, "config file (key = value lines)");
    cmd->add_option("--model", f.model_kind, "spatial model: ppp or mcp");
    cmd->add_option("--lambda-b", f.lambda_b, "BS density");
    cmd->add_option("--lambda-u", f.lambda_u, "user density (ppp)");
    cmd->add_option("--cluster-radius,-R", f.cluster_radius, "cluster radius (mcp)");
    cmd->add_option("--alpha", f.alpha, "path-loss exponent (> 2)");
    cmd->add_option("--t-db-min", f.t_db_min, "lowest threshold, dB");
    cmd->add_option("--t-db-max", f.t_db_max, "highest threshold, dB");
    cmd->add_option("--t-db-step", f.t_db_step, "threshold step, dB");
    cmd->add_option("--schemes", f.schemes, "comma list: isp,msp,msp_ad");
    cmd->add_option("--roles", f.roles, "comma list: near,far");
    cmd->add_option("--laplace", f.laplace, "mcp evaluator: auto, exact or approx");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--window", f.window, "simulation window radius");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    cmd->add_option("--quad-tol", f.quad_tol, "coverage quadrature tolerance");
    cmd->add_option("-o,--output", f.output, "output CSV path (default stdout)");
    cmd->add_flag("--timing", f.timing, "fill the wall_ms column (breaks rerun identity)");
}

ExperimentSpec build_spec(const CommonFlags& f) {
    ExperimentSpec spec;
    if (!f.config_path.empty())
        spec = parse_config(f.config_path);

    auto text = std::string();  // flag overrides reuse the config parser
    if (!f.model_kind.empty())
        text += "model.kind = " + f.model_kind + "\n";
    if (f.lambda_b >= 0.0)
        text += "model.lambda_b = " + format_double(f.lambda_b) + "\n";
    if (f.lambda_u >= 0.0)
        text += "model.lambda_u = " + format_double(f.lambda_u) + "\n";
    if (f.cluster_radius >= 0.0)
        text += "model.r = " + format_double(f.cluster_radius) + "\n";
    if (f.alpha >= 0.0)
        text += "model.alpha = " + format_double(f.alpha) + "\n";
    if (!std::isnan(f.t_db_min))
        text += "sweep.t_db_min = " + format_double(f.t_db_min) + "\n";
    if (!std::isnan(f.t_db_max))
        text += "sweep.t_db_max = " + format_double(f.t_db_max) + "\n";
    if (!std::isnan(f.t_db_step))
        text += "sweep.t_db_step = " + format_double(f.t_db_step) + "\n";
    if (!f.schemes.empty())
        text += "schemes = " + f.schemes + "\n";
    if (!f.roles.empty())
        text += "roles = " + f.roles + "\n";
    if (!f.laplace.empty())
        text += "laplace = " + f.laplace + "\n";
    if (f.trials > 0)
        text += "mc.trials = " + std::to_string(f.trials) + "\n";
    if (f.seed >= 0)
        text += "mc.seed = " + std::to_string(f.seed) + "\n";
    if (f.window >= 0.0)
        text += "mc.window_radius = " + format_double(f.window) + "\n";
    if (f.threads >= 0)
        text += "mc.threads = " + std::to_string(f.threads) + "\n";
    if (f.quad_tol > 0.0)
        text += "quad.tol = " + format_double(f.quad_tol) + "\n";
    if (!f.output.empty())
        text += "output = " + f.output + "\n";
    if (f.timing)
        text += "output.timing = on\n";
    return parse_config_text(text, spec);
}

int emit(const ExperimentSpec& spec, const std::string& csv) {
    const std::string path = resolve_output_path(spec.output_path);
    if (path.empty()) {
        std::cout << csv;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "sircov: cannot write '" << path << "'\n";
        return 1;
    }
    out << csv;
    std::cerr << "wrote " << path << "\n";
    return 0;
}

int run_engine(const CommonFlags& flags, Engine engine, bool force_engine) {
    ExperimentSpec spec = build_spec(flags);
    if (force_engine)
        spec.engine = engine;
    const SweepResult result = run_sweep(spec);
    return emit(spec, result.csv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIR coverage for 2-user uplink NOMA (ISP vs MSP user ranking)"};
    app.require_subcommand(1);

    CommonFlags fa, fs, fw;
    CLI::App* analytic =
        app.add_subcommand("analytic", "analytic coverage sweep (quadrature only)");
    add_common_flags(analytic, fa);
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo coverage sweep (network simulator)");
    add_common_flags(simulate, fs);
    CLI::App* sweep =
        app.add_subcommand("sweep", "run the engines selected by the config (default both)");
    add_common_flags(sweep, fw);

    // validate
    CLI::App* validate = app.add_subcommand("validate", "run the acceptance checks");
    std::string level = "fast";
    int v_threads = 0;
    std::string report_path;
    bool self_test_fail = false;
    validate->add_option("--level", level, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));
    validate->add_option("--threads", v_threads, "worker threads (0 = all cores)");
    validate->add_option("--report", report_path, "write machine-readable CSV report");
    validate->add_flag("--self-test-fail", self_test_fail,
                       "run only a deliberately failing check (harness self-test)");

    // oracle
    CLI::App* oracle =
        app.add_subcommand("oracle", "fading oracle vs closed forms for one tuple");
    double o_r1 = 1.0, o_r2 = 2.0, o_alpha = 4.0, o_t_db = 0.0, o_interference = 0.0;
    std::uint64_t o_draws = 1000000, o_seed = 1;
    oracle->add_option("--r1", o_r1, "near distance");
    oracle->add_option("--r2", o_r2, "far distance");
    oracle->add_option("--alpha", o_alpha, "path-loss exponent");
    oracle->add_option("--t-db", o_t_db, "SIR threshold, dB");
    oracle->add_option("--interference", o_interference, "deterministic interference power");
    oracle->add_option("--draws", o_draws, "fading draws");
    oracle->add_option("--seed", o_seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analytic->parsed())
            return run_engine(fa, Engine::Analytic, true);
        if (simulate->parsed())
            return run_engine(fs, Engine::MC, true);
        if (sweep->parsed())
            return run_engine(fw, Engine::Both, false);

        if (validate->parsed()) {
            ValidationReport report;
            if (self_test_fail) {
                // fixture path: exercise failure reporting without the full suite
                report.checks.push_back({"X", "inverted bound self-test",
                                         "deliberate failure", false, 0.0});
            } else {
                report = run_validation(
                    level == "full" ? ValidateLevel::Full : ValidateLevel::Fast, v_threads);
            }
            for (const CheckResult& c : report.checks)
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name
                          << " -- " << c.detail << "\n";
            std::cout << (report.all_pass() ? "validation passed" : "validation FAILED")
                      << " (" << report.checks.size() << " checks)\n";
            if (!report_path.empty()) {
                std::ofstream out(resolve_output_path(report_path), std::ios::binary);
                if (!out) {
                    std::cerr << "sircov: cannot write report\n";
                    return 1;
                }
                out << report.to_csv();
            }
            return report.all_pass() ? 0 : 1;
        }

        if (oracle->parsed()) {
            const OrderedDistancePair pair(o_r1, o_r2);
            const double t = SirThreshold::from_db(o_t_db).linear;
            const OracleResult mc =
                fading_oracle(pair, o_alpha, t, o_interference, o_draws, o_seed);
            const ConstInterferenceLaplace laplace(o_interference);
            ConditionalCoverageInputs in;
            in.pair = pair;
            in.t = t;
            in.alpha = o_alpha;
            in.laplace = &laplace;
            std::printf("scheme,role,oracle,closed_form,abs_diff,three_se\n");
            for (int c = 0; c < kCombos; ++c) {
                const double closed =
                    conditional_coverage(combo_scheme(c), combo_role(c), in);
                std::printf("%s,%s,%.6f,%.6f,%.2e,%.2e\n", to_string(combo_scheme(c)),
                            to_string(combo_role(c)), mc.probability[c], closed,
                            std::fabs(mc.probability[c] - closed),
                            3.0 * mc.standard_error(c));
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "sircov: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
