#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sircov/laplace.hpp"
#include "sircov/model.hpp"
#include "sircov/simulate.hpp"

namespace sircov {

enum class Engine { Analytic, MC, Both };

const char* to_string(Engine engine);

// One sweep request: which model, schemes, roles, thresholds and engines to
// run. Defaults are the reference benchmark: alpha = 4, lambda_b = 0.001,
// MCP R = 10, thresholds -10..20 dB.
struct ExperimentSpec {
    ModelConfig model = ModelConfig::mcp(1e-3, 10.0, 4.0);
    std::vector<RankingScheme> schemes = {RankingScheme::ISP, RankingScheme::MSP,
                                          RankingScheme::MSP_AD};
    std::vector<UserRole> roles = {UserRole::Near, UserRole::Far};
    double t_db_min = -10.0;
    double t_db_max = 20.0;
    double t_db_step = 1.0;
    Engine engine = Engine::Both;
    LaplaceVariant laplace_variant = LaplaceVariant::Auto;
    std::uint64_t mc_trials = 100000;
    std::uint64_t mc_seed = 1;
    double mc_window = 0.0;  // 0 = default
    int threads = 0;
    double quad_tol = 1e-4;
    std::string output_path;  // empty = stdout
    bool timing = false;      // off keeps reruns byte-identical

    std::vector<double> t_grid_db() const;
    std::vector<double> t_grid_linear() const;
    void validate() const;
};

struct SweepRow {
    PointProcess model;
    RankingScheme scheme;
    UserRole role;
    double t_db = 0.0;
    double t_linear = 1.0;
    CoverageEstimate estimate;
    LaplaceVariant variant = LaplaceVariant::Exact;  // resolved; analytic rows only
    double wall_ms = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string csv;
};

inline constexpr const char* kCsvSchemaLine = "# sircov-csv v1";
inline constexpr const char* kCsvHeader =
    "model,scheme,role,t_db,t_linear,coverage,ci_halfwidth,trials,seed,engine,"
    "laplace_variant,wall_ms";

// Runs every requested (scheme, role, threshold, engine) cell. Analytic cells
// integrate the conditional closed forms; MC cells come from one common
// random-number simulation pass. Output rows are emitted in a fixed sort
// order and, with timing off, the CSV is byte-identical across reruns and
// thread counts.
SweepResult run_sweep(const ExperimentSpec& spec);

// Flat key = value format; '#' starts a comment. Unknown keys, malformed
// values and invariant violations raise ConfigError naming the key.
ExperimentSpec parse_config_text(const std::string& text,
                                 const ExperimentSpec& defaults = {});
ExperimentSpec parse_config(const std::string& path, const ExperimentSpec& defaults = {});

// Applies the SIRCOV_OUTPUT_DIR override (directory part only).
std::string resolve_output_path(const std::string& path);

// Locale-independent shortest-exact float formatting used by the CSV writer.
std::string format_double(double v);

}  // namespace sircov
