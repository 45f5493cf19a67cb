#include "sircov/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "sircov/coverage.hpp"
#include "sircov/parallel.hpp"

namespace sircov {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

int scheme_rank(RankingScheme s) { return static_cast<int>(s); }

bool row_less(const SweepRow& a, const SweepRow& b) {
    if (a.model != b.model)
        return a.model < b.model;
    if (a.scheme != b.scheme)
        return scheme_rank(a.scheme) < scheme_rank(b.scheme);
    if (a.role != b.role)
        return a.role < b.role;
    if (a.t_db != b.t_db)
        return a.t_db < b.t_db;
    return a.estimate.method < b.estimate.method;
}

}  // namespace

const char* to_string(Engine engine) {
    switch (engine) {
        case Engine::Analytic: return "analytic";
        case Engine::MC: return "mc";
        default: return "both";
    }
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> ExperimentSpec::t_grid_db() const {
    std::vector<double> grid;
    const long n = std::lround((t_db_max - t_db_min) / t_db_step);
    grid.reserve(n + 1);
    for (long i = 0; i <= n; ++i) {
        const double db = t_db_min + static_cast<double>(i) * t_db_step;
        if (db > t_db_max + 1e-9 * std::fabs(t_db_step))
            break;
        grid.push_back(db);
    }
    return grid;
}

std::vector<double> ExperimentSpec::t_grid_linear() const {
    std::vector<double> grid = t_grid_db();
    for (double& v : grid)
        v = std::pow(10.0, v / 10.0);
    return grid;
}

void ExperimentSpec::validate() const {
    model.validate();
    if (!(t_db_step > 0.0))
        throw ConfigError("sweep.t_db_step: must be > 0");
    if (!(t_db_max >= t_db_min))
        throw ConfigError("sweep.t_db_max: must be >= sweep.t_db_min");
    if (schemes.empty())
        throw ConfigError("schemes: at least one scheme required");
    if (roles.empty())
        throw ConfigError("roles: at least one role required");
    if (mc_trials < 1)
        throw ConfigError("mc.trials: must be >= 1");
    if (!(quad_tol > 0.0))
        throw ConfigError("quad.tol: must be > 0");
}

SweepResult run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const std::vector<double> dbs = spec.t_grid_db();
    const std::vector<double> ts = spec.t_grid_linear();
    const LaplaceVariant variant = resolve_variant(spec.model, spec.laplace_variant);

    SweepResult out;

    if (spec.engine != Engine::MC) {
        LaplaceOptions opts;
        opts.variant = variant;
        opts.threads = spec.threads;
        double s_hint = 10.0;
        for (double t : ts)
            s_hint = std::max(s_hint, laplace_argument_bound(spec.model, t));
        opts.s_max_hint = s_hint;
        const auto laplace = make_laplace(spec.model, opts);

        struct Cell {
            RankingScheme scheme;
            UserRole role;
            std::size_t ti;
        };
        std::vector<Cell> cells;
        for (RankingScheme s : spec.schemes)
            for (UserRole r : spec.roles)
                for (std::size_t ti = 0; ti < ts.size(); ++ti)
                    cells.push_back({s, r, ti});

        std::vector<SweepRow> rows(cells.size());
        std::mutex first_error_mutex;
        std::exception_ptr first_error;
        parallel_chunks(cells.size(), effective_threads(spec.threads),
                        [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                            for (std::uint64_t i = begin; i < end; ++i) {
                                try {
                                    const Cell& c = cells[i];
                                    const double t0 = now_ms();
                                    SweepRow row;
                                    row.model = spec.model.kind;
                                    row.scheme = c.scheme;
                                    row.role = c.role;
                                    row.t_db = dbs[c.ti];
                                    row.t_linear = ts[c.ti];
                                    row.estimate = coverage(
                                        spec.model, c.scheme, c.role,
                                        SirThreshold::from_linear(ts[c.ti]), *laplace,
                                        spec.quad_tol);
                                    row.variant = variant;
                                    row.wall_ms = spec.timing ? now_ms() - t0 : 0.0;
                                    rows[i] = row;
                                } catch (...) {
                                    const std::lock_guard<std::mutex> lock(first_error_mutex);
                                    if (!first_error)
                                        first_error = std::current_exception();
                                }
                            }
                        });
        if (first_error)
            std::rethrow_exception(first_error);
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }

    if (spec.engine != Engine::Analytic) {
        SimConfig sim;
        sim.model = spec.model;
        sim.window_radius = spec.mc_window;
        sim.trials = spec.mc_trials;
        sim.master_seed = spec.mc_seed;
        sim.t_grid = ts;
        sim.threads = spec.threads;

        const double t0 = now_ms();
        const SimulationResult result = run_simulation(sim);
        const double elapsed = spec.timing ? now_ms() - t0 : 0.0;

        for (RankingScheme s : spec.schemes)
            for (UserRole r : spec.roles)
                for (std::size_t ti = 0; ti < ts.size(); ++ti) {
                    SweepRow row;
                    row.model = spec.model.kind;
                    row.scheme = s;
                    row.role = r;
                    row.t_db = dbs[ti];
                    row.t_linear = ts[ti];
                    row.estimate = result.coverage(s, r)[ti];
                    row.wall_ms = elapsed;
                    out.rows.push_back(row);
                }
    }

    std::stable_sort(out.rows.begin(), out.rows.end(), row_less);

    std::ostringstream csv;
    csv << kCsvSchemaLine << "\n" << kCsvHeader << "\n";
    for (const SweepRow& row : out.rows) {
        const bool mc = row.estimate.method == Method::MonteCarlo;
        csv << to_string(row.model) << ',' << to_string(row.scheme) << ','
            << to_string(row.role) << ',' << format_double(row.t_db) << ','
            << format_double(row.t_linear) << ',' << format_double(row.estimate.value)
            << ',' << format_double(row.estimate.ci_halfwidth) << ',';
        if (mc)
            csv << row.estimate.trials;
        csv << ',';
        if (mc)
            csv << row.estimate.seed;
        csv << ',' << (mc ? "mc" : "analytic") << ',' << (mc ? "" : to_string(row.variant))
            << ',' << format_double(row.wall_ms) << '\n';
    }
    out.csv = csv.str();
    return out;
}

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    int line;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + kv.key + "': expected a number, got '" +
                          kv.value + "'");
    }
}

std::uint64_t parse_count(const KeyValue& kv) {
    try {
        if (kv.value.find('-') != std::string::npos)
            throw std::invalid_argument("negative");  // stoull silently wraps
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(kv.value, &pos);
        if (pos != kv.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + kv.key + "': expected a nonnegative integer, got '" +
                          kv.value + "'");
    }
}

bool parse_switch(const KeyValue& kv) {
    if (kv.value == "on" || kv.value == "true" || kv.value == "1")
        return true;
    if (kv.value == "off" || kv.value == "false" || kv.value == "0")
        return false;
    throw ConfigError("config: key '" + kv.key + "': expected on/off, got '" + kv.value +
                      "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',') {
            const std::string p = trim(cur);
            if (!p.empty())
                parts.push_back(p);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return parts;
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text, const ExperimentSpec& defaults) {
    ExperimentSpec spec = defaults;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::vector<KeyValue> entries;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        entries.push_back(
            {trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)), line_no});
    }

    for (const KeyValue& kv : entries) {
        if (kv.key == "model.kind") {
            if (kv.value == "ppp")
                spec.model.kind = PointProcess::PPP;
            else if (kv.value == "mcp")
                spec.model.kind = PointProcess::MCP;
            else
                throw ConfigError("config: key 'model.kind': expected ppp or mcp, got '" +
                                  kv.value + "'");
        } else if (kv.key == "model.lambda_b") {
            spec.model.lambda_b = parse_number(kv);
        } else if (kv.key == "model.lambda_u") {
            spec.model.lambda_u = parse_number(kv);
        } else if (kv.key == "model.r") {
            spec.model.cluster_radius = parse_number(kv);
        } else if (kv.key == "model.alpha") {
            spec.model.alpha = parse_number(kv);
        } else if (kv.key == "sweep.t_db_min") {
            spec.t_db_min = parse_number(kv);
        } else if (kv.key == "sweep.t_db_max") {
            spec.t_db_max = parse_number(kv);
        } else if (kv.key == "sweep.t_db_step") {
            spec.t_db_step = parse_number(kv);
        } else if (kv.key == "engine") {
            if (kv.value == "analytic")
                spec.engine = Engine::Analytic;
            else if (kv.value == "mc")
                spec.engine = Engine::MC;
            else if (kv.value == "both")
                spec.engine = Engine::Both;
            else
                throw ConfigError(
                    "config: key 'engine': expected analytic, mc or both, got '" + kv.value +
                    "'");
        } else if (kv.key == "laplace") {
            if (kv.value == "auto")
                spec.laplace_variant = LaplaceVariant::Auto;
            else if (kv.value == "exact")
                spec.laplace_variant = LaplaceVariant::Exact;
            else if (kv.value == "approx")
                spec.laplace_variant = LaplaceVariant::Approx;
            else
                throw ConfigError(
                    "config: key 'laplace': expected auto, exact or approx, got '" +
                    kv.value + "'");
        } else if (kv.key == "schemes") {
            spec.schemes.clear();
            for (const std::string& p : split_list(kv.value)) {
                if (p == "isp")
                    spec.schemes.push_back(RankingScheme::ISP);
                else if (p == "msp")
                    spec.schemes.push_back(RankingScheme::MSP);
                else if (p == "msp_ad")
                    spec.schemes.push_back(RankingScheme::MSP_AD);
                else
                    throw ConfigError("config: key 'schemes': unknown scheme '" + p + "'");
            }
        } else if (kv.key == "roles") {
            spec.roles.clear();
            for (const std::string& p : split_list(kv.value)) {
                if (p == "near")
                    spec.roles.push_back(UserRole::Near);
                else if (p == "far")
                    spec.roles.push_back(UserRole::Far);
                else
                    throw ConfigError("config: key 'roles': unknown role '" + p + "'");
            }
        } else if (kv.key == "mc.trials") {
            spec.mc_trials = parse_count(kv);
        } else if (kv.key == "mc.seed") {
            spec.mc_seed = parse_count(kv);
        } else if (kv.key == "mc.window_radius") {
            spec.mc_window = parse_number(kv);
        } else if (kv.key == "mc.threads") {
            spec.threads = static_cast<int>(parse_count(kv));
        } else if (kv.key == "quad.tol") {
            spec.quad_tol = parse_number(kv);
        } else if (kv.key == "output") {
            spec.output_path = kv.value;
        } else if (kv.key == "output.timing") {
            spec.timing = parse_switch(kv);
        } else {
            throw ConfigError("config: unknown key '" + kv.key + "' (line " +
                              std::to_string(kv.line) + ")");
        }
    }

    spec.validate();
    return spec;
}

ExperimentSpec parse_config(const std::string& path, const ExperimentSpec& defaults) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), defaults);
}

std::string resolve_output_path(const std::string& path) {
    if (path.empty())
        return path;
    const char* dir = std::getenv("SIRCOV_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0')
        return path;
    const auto slash = path.find_last_of('/');
    const std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::string d(dir);
    if (!d.empty() && d.back() != '/')
        d += '/';
    return d + base;
}

}  // namespace sircov
