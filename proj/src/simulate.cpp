#include "sircov/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "sircov/parallel.hpp"

namespace sircov {

namespace {

constexpr std::uint64_t kMaxUserResamples = 10000;
constexpr std::uint64_t kMaxCellProposals = 10000000;

// Flat uniform grid over [-extent, extent]^2 for nearest-point queries.
struct PointGrid {
    int m = 0;
    double extent = 0.0;
    double cell = 0.0;
    std::vector<std::uint32_t> start;  // size m*m + 1
    std::vector<std::uint32_t> item;   // original indices, bucket order
    std::vector<double> px, py;        // coordinates, bucket order
    std::vector<std::uint32_t> index_ws;

    int cell_of(double v) const {
        const int i = static_cast<int>((v + extent) / cell);
        return std::clamp(i, 0, m - 1);
    }

    void build(const std::vector<double>& xs, const std::vector<double>& ys,
               double half_extent, int cells_per_side) {
        m = std::max(cells_per_side, 1);
        extent = half_extent;
        cell = 2.0 * extent / m;
        const std::size_t n = xs.size();
        start.assign(static_cast<std::size_t>(m) * m + 1, 0);
        index_ws.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            index_ws[i] = static_cast<std::uint32_t>(cell_of(xs[i]) * m + cell_of(ys[i]));
            ++start[index_ws[i] + 1];
        }
        for (std::size_t c = 1; c < start.size(); ++c)
            start[c] += start[c - 1];
        item.resize(n);
        px.resize(n);
        py.resize(n);
        std::vector<std::uint32_t> cursor(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t pos = cursor[index_ws[i]]++;
            item[pos] = static_cast<std::uint32_t>(i);
            px[pos] = xs[i];
            py[pos] = ys[i];
        }
    }

    template <class Visit>
    void scan_cell(int cx, int cy, Visit&& visit) const {
        if (cx < 0 || cx >= m || cy < 0 || cy >= m)
            return;
        const std::size_t c = static_cast<std::size_t>(cx) * m + cy;
        for (std::uint32_t k = start[c]; k < start[c + 1]; ++k)
            visit(k);
    }

    std::uint32_t nearest(double x, double y) const {
        const int ix = cell_of(x);
        const int iy = cell_of(y);
        double best_d2 = std::numeric_limits<double>::infinity();
        std::uint32_t best = 0;
        auto visit = [&](std::uint32_t k) {
            const double dx = px[k] - x;
            const double dy = py[k] - y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
                best_d2 = d2;
                best = item[k];
            }
        };
        for (int r = 0; r <= 2 * m; ++r) {
            if (r > 0) {
                const double bound = (r - 1) * cell;
                if (bound * bound >= best_d2)
                    break;
            }
            if (r == 0) {
                scan_cell(ix, iy, visit);
                continue;
            }
            for (int cx = ix - r; cx <= ix + r; ++cx) {
                scan_cell(cx, iy - r, visit);
                scan_cell(cx, iy + r, visit);
            }
            for (int cy = iy - r + 1; cy <= iy + r - 1; ++cy) {
                scan_cell(ix - r, cy, visit);
                scan_cell(ix + r, cy, visit);
            }
        }
        return best;
    }

    // true iff some point lies strictly closer than `limit` to (x, y)
    bool any_within(double x, double y, double limit) const {
        const int ix = cell_of(x);
        const int iy = cell_of(y);
        const double limit2 = limit * limit;
        bool found = false;
        auto visit = [&](std::uint32_t k) {
            const double dx = px[k] - x;
            const double dy = py[k] - y;
            if (dx * dx + dy * dy < limit2)
                found = true;
        };
        for (int r = 0; r <= 2 * m && !found; ++r) {
            if (r > 0) {
                const double bound = (r - 1) * cell;
                if (bound >= limit)
                    break;
            }
            if (r == 0) {
                scan_cell(ix, iy, visit);
                continue;
            }
            for (int cx = ix - r; cx <= ix + r && !found; ++cx) {
                scan_cell(cx, iy - r, visit);
                scan_cell(cx, iy + r, visit);
            }
            for (int cy = iy - r + 1; cy <= iy + r - 1 && !found; ++cy) {
                scan_cell(ix - r, cy, visit);
                scan_cell(ix + r, cy, visit);
            }
        }
        return found;
    }
};

int grid_resolution(double window, double lambda_b) {
    return std::clamp(static_cast<int>(std::lround(2.0 * window * std::sqrt(lambda_b))), 4,
                      512);
}

}  // namespace

double SimConfig::effective_window() const {
    return window_radius > 0.0 ? window_radius : 10.0 / std::sqrt(kPi * model.lambda_b);
}

void SimConfig::validate() const {
    model.validate();
    if (trials < 1)
        throw ConfigError("mc.trials: must be >= 1");
    const double min_window = 10.0 / std::sqrt(kPi * model.lambda_b);
    if (window_radius > 0.0 && window_radius < min_window * (1.0 - 1e-12))
        throw ConfigError("mc.window_radius: below 10 mean BS spacings");
    if (t_grid.empty())
        throw ConfigError("sweep: threshold grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0))
            throw ConfigError("sweep: thresholds must be > 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw ConfigError("sweep: threshold grid must be strictly increasing");
    }
}

double NetworkRealization::interference(double alpha) const {
    double total = 0.0;
    for (const auto& it : interferers)
        total += it.fading * std::pow(it.distance, -alpha);
    return total;
}

int combo_index(RankingScheme scheme, UserRole role) {
    return static_cast<int>(scheme) * 2 + (role == UserRole::Far ? 1 : 0);
}

RankingScheme combo_scheme(int combo) {
    return static_cast<RankingScheme>(combo / 2);
}

UserRole combo_role(int combo) {
    return combo % 2 == 0 ? UserRole::Near : UserRole::Far;
}

EventOutcomes evaluate_events(const NetworkRealization& real, double alpha,
                              const std::vector<double>& t_grid) {
    EventOutcomes out;
    const SirSample s(real, alpha);
    out.near_is_stronger = s.s_near > s.s_far;
    for (auto& v : out.success)
        v.resize(t_grid.size());
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        const auto e = decode_events(s, t_grid[ti]);
        for (int c = 0; c < kCombos; ++c)
            out.success[c][ti] = e[c] ? 1 : 0;
    }
    return out;
}

struct NetworkSampler::Workspace {
    std::vector<double> bs_x, bs_y;
    std::vector<double> user_x, user_y;
    std::vector<std::uint32_t> user_bs;
    std::vector<std::uint32_t> cell_count, cell_offset, cell_users;
    PointGrid grid;
};

NetworkSampler::NetworkSampler(const SimConfig& config)
    : config_(config), ws_(std::make_unique<Workspace>()) {
    config_.validate();
    window_ = config_.effective_window();
}

NetworkSampler::~NetworkSampler() = default;
NetworkSampler::NetworkSampler(NetworkSampler&&) noexcept = default;
NetworkSampler& NetworkSampler::operator=(NetworkSampler&&) noexcept = default;

void NetworkSampler::sample_ppp(Rng& rng) {
    Workspace& ws = *ws_;
    const ModelConfig& model = config_.model;
    const double W = window_;
    const double area = kPi * W * W;

    const std::uint64_t n_other = rng.poisson(model.lambda_b * area);
    ws.bs_x.assign(1, 0.0);
    ws.bs_y.assign(1, 0.0);
    ws.bs_x.reserve(n_other + 1);
    ws.bs_y.reserve(n_other + 1);
    for (std::uint64_t i = 0; i < n_other; ++i) {
        double x, y;
        rng.point_in_disc(W, 0.0, 0.0, x, y);
        ws.bs_x.push_back(x);
        ws.bs_y.push_back(y);
    }
    const std::uint32_t n_bs = static_cast<std::uint32_t>(ws.bs_x.size());
    ws.grid.build(ws.bs_x, ws.bs_y, W, grid_resolution(W, model.lambda_b));

    // Resample the user process until the typical cell holds a NOMA pair.
    const double mean_users = model.users_density() * area;
    real_.user_resamples = 0;
    for (;;) {
        const std::uint64_t n_u = rng.poisson(mean_users);
        ws.user_x.resize(n_u);
        ws.user_y.resize(n_u);
        ws.user_bs.resize(n_u);
        ws.cell_count.assign(n_bs, 0);
        for (std::uint64_t i = 0; i < n_u; ++i) {
            rng.point_in_disc(W, 0.0, 0.0, ws.user_x[i], ws.user_y[i]);
            const std::uint32_t bs = ws.grid.nearest(ws.user_x[i], ws.user_y[i]);
            ws.user_bs[i] = bs;
            ++ws.cell_count[bs];
        }
        if (ws.cell_count[0] >= 2)
            break;
        if (++real_.user_resamples > kMaxUserResamples)
            throw ConfigError("sample_network: typical cell rejection did not terminate");
    }

    ws.cell_offset.assign(n_bs + 1, 0);
    for (std::uint32_t j = 0; j < n_bs; ++j)
        ws.cell_offset[j + 1] = ws.cell_offset[j] + ws.cell_count[j];
    ws.cell_users.resize(ws.user_bs.size());
    {
        std::vector<std::uint32_t>& cursor = ws.cell_count;  // reuse as write cursor
        std::copy(ws.cell_offset.begin(), ws.cell_offset.end() - 1, cursor.begin());
        for (std::uint32_t i = 0; i < ws.user_bs.size(); ++i)
            ws.cell_users[cursor[ws.user_bs[i]]++] = i;
    }

    real_.interferers.clear();
    for (std::uint32_t j = 0; j < n_bs; ++j) {
        const std::uint32_t begin = ws.cell_offset[j];
        const std::uint32_t k = ws.cell_offset[j + 1] - begin;
        if (k >= 2) {
            std::uint64_t a = rng.index(k);
            std::uint64_t b = rng.index(k - 1);
            if (b >= a)
                ++b;
            const std::uint32_t ua = ws.cell_users[begin + a];
            const std::uint32_t ub = ws.cell_users[begin + b];
            const double da = std::hypot(ws.user_x[ua], ws.user_y[ua]);
            const double db = std::hypot(ws.user_x[ub], ws.user_y[ub]);
            const double ha = rng.exponential();
            const double hb = rng.exponential();
            if (j == 0) {
                if (da <= db) {
                    real_.typical_pair = OrderedDistancePair(da, db);
                    real_.h_near = ha;
                    real_.h_far = hb;
                } else {
                    real_.typical_pair = OrderedDistancePair(db, da);
                    real_.h_near = hb;
                    real_.h_far = ha;
                }
            } else {
                real_.interferers.push_back({da, ha});
                real_.interferers.push_back({db, hb});
            }
        } else if (k == 1) {
            // lone-user cells transmit with a single (unpaired) user
            const std::uint32_t u = ws.cell_users[begin];
            real_.interferers.push_back(
                {std::hypot(ws.user_x[u], ws.user_y[u]), rng.exponential()});
        }
    }
}

void NetworkSampler::sample_mcp(Rng& rng) {
    const ModelConfig& model = config_.model;
    const double W = window_;
    const double R = model.cluster_radius;

    real_.user_resamples = 0;
    real_.interferers.clear();

    // typical cluster at the origin
    const double ra = R * std::sqrt(rng.uniform());
    const double ha = rng.exponential();
    const double rb = R * std::sqrt(rng.uniform());
    const double hb = rng.exponential();
    if (ra <= rb) {
        real_.typical_pair = OrderedDistancePair(ra, rb);
        real_.h_near = ha;
        real_.h_far = hb;
    } else {
        real_.typical_pair = OrderedDistancePair(rb, ra);
        real_.h_near = hb;
        real_.h_far = ha;
    }

    const std::uint64_t n_bs = rng.poisson(model.lambda_b * kPi * W * W);
    real_.interferers.reserve(2 * n_bs);
    for (std::uint64_t j = 0; j < n_bs; ++j) {
        double bx, by;
        rng.point_in_disc(W, 0.0, 0.0, bx, by);
        for (int k = 0; k < 2; ++k) {
            double ux, uy;
            rng.point_in_disc(R, bx, by, ux, uy);
            real_.interferers.push_back({std::hypot(ux, uy), rng.exponential()});
        }
    }
}

const NetworkRealization& NetworkSampler::sample(std::uint64_t trial_index) {
    Rng rng(config_.master_seed, trial_index);
    if (config_.model.kind == PointProcess::PPP)
        sample_ppp(rng);
    else
        sample_mcp(rng);
    return real_;
}

namespace {

CoverageEstimate count_to_estimate(std::uint64_t count, std::uint64_t trials,
                                   std::uint64_t seed) {
    CoverageEstimate est;
    est.value = static_cast<double>(count) / static_cast<double>(trials);
    est.ci_halfwidth =
        1.96 * std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(trials));
    est.trials = trials;
    est.method = Method::MonteCarlo;
    est.seed = seed;
    return est;
}

}  // namespace

SimulationResult run_simulation(const SimConfig& config) {
    config.validate();
    const std::size_t n_t = config.t_grid.size();
    const double alpha = config.model.alpha;

    SimulationResult result;
    result.t_grid = config.t_grid;
    result.trials = config.trials;
    for (auto& v : result.success_counts)
        v.assign(n_t, 0);

    std::uint64_t ordering_count = 0;
    std::uint64_t resample_total = 0;
    std::uint64_t interferer_total = 0;
    std::mutex merge;

    parallel_chunks(config.trials, effective_threads(config.threads),
                    [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                        NetworkSampler sampler(config);
                        std::array<std::vector<std::uint64_t>, kCombos> local;
                        for (auto& v : local)
                            v.assign(n_t, 0);
                        std::uint64_t l_order = 0, l_resample = 0, l_interf = 0;
                        for (std::uint64_t trial = begin; trial < end; ++trial) {
                            const NetworkRealization& real = sampler.sample(trial);
                            const SirSample s(real, alpha);
                            l_order += s.s_near > s.s_far ? 1 : 0;
                            l_resample += real.user_resamples;
                            l_interf += real.interferers.size();
                            for (std::size_t ti = 0; ti < n_t; ++ti) {
                                const auto e = decode_events(s, config.t_grid[ti]);
                                for (int c = 0; c < kCombos; ++c)
                                    local[c][ti] += e[c] ? 1 : 0;
                            }
                        }
                        const std::lock_guard<std::mutex> lock(merge);
                        for (int c = 0; c < kCombos; ++c)
                            for (std::size_t ti = 0; ti < n_t; ++ti)
                                result.success_counts[c][ti] += local[c][ti];
                        ordering_count += l_order;
                        resample_total += l_resample;
                        interferer_total += l_interf;
                    });

    for (int c = 0; c < kCombos; ++c) {
        result.estimates[c].resize(n_t);
        for (std::size_t ti = 0; ti < n_t; ++ti)
            result.estimates[c][ti] = count_to_estimate(result.success_counts[c][ti],
                                                        config.trials, config.master_seed);
    }
    result.ordering_count = ordering_count;
    result.ordering = count_to_estimate(ordering_count, config.trials, config.master_seed);
    result.rejection_rate =
        static_cast<double>(resample_total) / static_cast<double>(config.trials);
    result.mean_interferers =
        static_cast<double>(interferer_total) / static_cast<double>(config.trials);
    return result;
}

std::vector<CoverageEstimate> estimate_coverage(const SimConfig& config,
                                                RankingScheme scheme, UserRole role) {
    return run_simulation(config).estimates[combo_index(scheme, role)];
}

// Rejection against the realized BSs: a proposal is a cell point iff no BS
// lies closer to it than the origin does. Cells reaching past 4 mean spacings
// are astronomically rare, so proposals are confined to that disc and
// blocking BSs to twice it.
struct TypicalPairSampler::Impl {
    double lambda_b;
    double w_cell;
    double w_bs;
    std::vector<double> xs, ys;
    PointGrid grid;

    explicit Impl(double lb)
        : lambda_b(lb), w_cell(4.0 / std::sqrt(lb)), w_bs(8.0 / std::sqrt(lb)) {}

    OrderedDistancePair sample_pair(Rng& rng) {
        const std::uint64_t n = rng.poisson(lambda_b * kPi * w_bs * w_bs);
        xs.resize(n);
        ys.resize(n);
        for (std::uint64_t i = 0; i < n; ++i)
            rng.point_in_disc(w_bs, 0.0, 0.0, xs[i], ys[i]);
        grid.build(xs, ys, w_bs, grid_resolution(w_bs, lambda_b));

        double d[2];
        for (int u = 0; u < 2; ++u) {
            for (std::uint64_t attempt = 0;; ++attempt) {
                if (attempt > kMaxCellProposals)
                    throw ConfigError("typical-cell sampling did not terminate");
                double x, y;
                rng.point_in_disc(w_cell, 0.0, 0.0, x, y);
                const double dist = std::hypot(x, y);
                if (n == 0 || !grid.any_within(x, y, dist)) {
                    d[u] = dist;
                    break;
                }
            }
        }
        return d[0] <= d[1] ? OrderedDistancePair(d[0], d[1])
                            : OrderedDistancePair(d[1], d[0]);
    }
};

TypicalPairSampler::TypicalPairSampler(double lambda_b)
    : impl_(std::make_unique<Impl>(lambda_b)) {
    if (!(lambda_b > 0.0))
        throw ConfigError("TypicalPairSampler: lambda_b must be > 0");
}

TypicalPairSampler::~TypicalPairSampler() = default;
TypicalPairSampler::TypicalPairSampler(TypicalPairSampler&&) noexcept = default;
TypicalPairSampler& TypicalPairSampler::operator=(TypicalPairSampler&&) noexcept = default;

OrderedDistancePair TypicalPairSampler::sample(Rng& rng) {
    return impl_->sample_pair(rng);
}

CoverageEstimate estimate_ordering_probability(const SimConfig& config) {
    config.validate();
    const ModelConfig& model = config.model;
    const double neg_alpha = -model.alpha;

    std::uint64_t wins = 0;
    std::mutex merge;
    parallel_chunks(
        config.trials, effective_threads(config.threads),
        [&](unsigned, std::uint64_t begin, std::uint64_t end) {
            std::uint64_t local = 0;
            if (model.kind == PointProcess::MCP) {
                const double R = model.cluster_radius;
                for (std::uint64_t trial = begin; trial < end; ++trial) {
                    Rng rng(config.master_seed, trial);
                    const double ra = R * std::sqrt(rng.uniform());
                    const double rb = R * std::sqrt(rng.uniform());
                    const double r1 = std::min(ra, rb);
                    const double r2 = std::max(ra, rb);
                    const double h1 = rng.exponential();
                    const double h2 = rng.exponential();
                    local += h1 * std::pow(r1, neg_alpha) > h2 * std::pow(r2, neg_alpha);
                }
            } else {
                TypicalPairSampler sampler(model.lambda_b);
                for (std::uint64_t trial = begin; trial < end; ++trial) {
                    Rng rng(config.master_seed, trial);
                    const OrderedDistancePair pair = sampler.sample(rng);
                    const double h1 = rng.exponential();
                    const double h2 = rng.exponential();
                    local += h1 * std::pow(pair.r1, neg_alpha) >
                             h2 * std::pow(pair.r2, neg_alpha);
                }
            }
            const std::lock_guard<std::mutex> lock(merge);
            wins += local;
        });
    return count_to_estimate(wins, config.trials, config.master_seed);
}

CoverageEstimate estimate_ordering_probability_fixed_pair(const OrderedDistancePair& pair,
                                                          double alpha,
                                                          std::uint64_t trials,
                                                          std::uint64_t seed) {
    if (!(pair.r2 > 0.0))
        throw ConfigError("ordering probability: degenerate pair (r2 = 0)");
    Rng rng(seed, 0);
    const double w1 = std::pow(pair.r1, -alpha);
    const double w2 = std::pow(pair.r2, -alpha);
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const double h1 = rng.exponential();
        const double h2 = rng.exponential();
        wins += h1 * w1 > h2 * w2;
    }
    return count_to_estimate(wins, trials, seed);
}

double OracleResult::standard_error(int combo) const {
    const double p = probability[combo];
    return std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(draws));
}

OracleResult fading_oracle(const OrderedDistancePair& pair, double alpha, double t,
                           double i_const, std::uint64_t draws, std::uint64_t seed) {
    if (draws < 1)
        throw ConfigError("oracle: draws must be >= 1");
    if (!(pair.r2 > 0.0))
        throw ConfigError("oracle: degenerate pair (r2 = 0)");
    if (!(i_const >= 0.0))
        throw ConfigError("oracle: interference must be >= 0");

    const double w1 = std::pow(pair.r1, -alpha);
    const double w2 = std::pow(pair.r2, -alpha);
    Rng rng(seed, 0);
    std::array<std::uint64_t, kCombos> counts{};
    for (std::uint64_t i = 0; i < draws; ++i) {
        const SirSample s(rng.exponential() * w1, rng.exponential() * w2, i_const);
        const auto e = decode_events(s, t);
        for (int c = 0; c < kCombos; ++c)
            counts[c] += e[c] ? 1 : 0;
    }
    OracleResult out;
    out.draws = draws;
    for (int c = 0; c < kCombos; ++c)
        out.probability[c] = static_cast<double>(counts[c]) / static_cast<double>(draws);
    return out;
}

}  // namespace sircov
