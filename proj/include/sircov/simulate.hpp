#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "sircov/model.hpp"
#include "sircov/rng.hpp"

namespace sircov {

struct SimConfig {
    ModelConfig model;
    double window_radius = 0.0;  // 0 = default, 10 mean BS spacings
    std::uint64_t trials = 100000;
    std::uint64_t master_seed = 1;
    std::vector<double> t_grid = {1.0};  // linear thresholds, strictly increasing
    int threads = 0;                     // 0 = hardware concurrency

    double effective_window() const;
    void validate() const;
};

struct Interferer {
    double distance;  // to the typical BS at the origin
    double fading;
};

// One sampled network as seen from the typical BS.
struct NetworkRealization {
    OrderedDistancePair typical_pair;
    double h_near = 0.0;
    double h_far = 0.0;
    std::vector<Interferer> interferers;
    std::uint64_t user_resamples = 0;  // PPP typical-cell rejections in this trial

    double interference(double alpha) const;
};

inline constexpr int kCombos = 6;

int combo_index(RankingScheme scheme, UserRole role);
RankingScheme combo_scheme(int combo);
UserRole combo_role(int combo);

// Received powers entering the SIC decode chain.
struct SirSample {
    double s_near;        // h1 r1^-alpha
    double s_far;         // h2 r2^-alpha
    double interference;  // I

    SirSample(const NetworkRealization& real, double alpha)
        : s_near(real.h_near * std::pow(real.typical_pair.r1, -alpha)),
          s_far(real.h_far * std::pow(real.typical_pair.r2, -alpha)),
          interference(real.interference(alpha)) {}
    SirSample(double s1, double s2, double i) : s_near(s1), s_far(s2), interference(i) {}
};

// Raw decode-success indicators for one draw at threshold t, in combo order.
// Comparisons are cross-multiplied, so zero interference means infinite SIR.
inline std::array<bool, kCombos> decode_events(const SirSample& s, double t) {
    const double s1 = s.s_near, s2 = s.s_far, i = s.interference;
    const bool near_stronger = s1 > s2;
    const bool near_first = s1 > t * (s2 + i);  // near decoded against far + inter
    const bool far_first = s2 > t * (s1 + i);   // far decoded against near + inter
    const bool near_clean = s1 > t * i;         // near decoded after removing far
    const bool far_clean = s2 > t * i;          // far decoded after removing near

    std::array<bool, kCombos> e;
    e[0] = (near_first && near_stronger) || (far_first && near_clean && !near_stronger);
    e[1] = (far_first && !near_stronger) || (near_first && far_clean && near_stronger);
    e[2] = near_first;
    e[3] = near_first && far_clean;
    e[4] = near_first && near_stronger;
    e[5] = near_first && far_clean && near_stronger;
    return e;
}

struct EventOutcomes {
    // success[combo][t_index]
    std::array<std::vector<char>, kCombos> success;
    bool near_is_stronger = false;
};

EventOutcomes evaluate_events(const NetworkRealization& real, double alpha,
                              const std::vector<double>& t_grid);

// Draws the full network for (master_seed, trial_index); deterministic and
// independent of evaluation order. The sampler carries reusable buffers, so
// keep one instance per thread.
class NetworkSampler {
public:
    explicit NetworkSampler(const SimConfig& config);
    ~NetworkSampler();
    NetworkSampler(NetworkSampler&&) noexcept;
    NetworkSampler& operator=(NetworkSampler&&) noexcept;

    const NetworkRealization& sample(std::uint64_t trial_index);

private:
    void sample_ppp(Rng& rng);
    void sample_mcp(Rng& rng);

    struct Workspace;
    SimConfig config_;
    double window_ = 0.0;
    NetworkRealization real_;
    std::unique_ptr<Workspace> ws_;
};

struct SimulationResult {
    std::vector<double> t_grid;
    std::array<std::vector<std::uint64_t>, kCombos> success_counts;
    std::array<std::vector<CoverageEstimate>, kCombos> estimates;
    std::uint64_t ordering_count = 0;
    CoverageEstimate ordering;
    std::uint64_t trials = 0;
    double rejection_rate = 0.0;  // PPP user-process resamples per trial
    double mean_interferers = 0.0;

    const std::vector<CoverageEstimate>& coverage(RankingScheme s, UserRole r) const {
        return estimates[combo_index(s, r)];
    }
};

// Ground-truth estimator: one pass over trials evaluates every scheme, role
// and threshold on common random numbers. Deterministic for a fixed
// master_seed regardless of thread count.
SimulationResult run_simulation(const SimConfig& config);

// Coverage estimates for one (scheme, role) across config.t_grid; a full
// simulation pass evaluates all combos anyway, so prefer run_simulation when
// more than one cell is needed.
std::vector<CoverageEstimate> estimate_coverage(const SimConfig& config,
                                                RankingScheme scheme, UserRole role);

// PPP-model typical pair sampled directly: two i.i.d. uniform points of the
// origin BS's Voronoi cell, the law the full network sampler induces for the
// selected pair. Orders of magnitude cheaper than a full network draw.
class TypicalPairSampler {
public:
    explicit TypicalPairSampler(double lambda_b);
    ~TypicalPairSampler();
    TypicalPairSampler(TypicalPairSampler&&) noexcept;
    TypicalPairSampler& operator=(TypicalPairSampler&&) noexcept;

    OrderedDistancePair sample(Rng& rng);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// P(near user is instantaneously stronger). Interferers do not enter this
// event, so only the typical pair is sampled: exact for MCP, and for PPP via
// TypicalPairSampler, which keeps a million trials cheap.
CoverageEstimate estimate_ordering_probability(const SimConfig& config);

// Unit-test hook: ordering probability with the pair pinned.
CoverageEstimate estimate_ordering_probability_fixed_pair(const OrderedDistancePair& pair,
                                                          double alpha,
                                                          std::uint64_t trials,
                                                          std::uint64_t seed);

struct OracleResult {
    std::array<double, kCombos> probability{};
    std::uint64_t draws = 0;

    double standard_error(int combo) const;
};

// Brute-force check of the conditional closed forms: Monte Carlo over the
// fading pair with deterministic interference power i_const, evaluating the
// raw decode events. Matches the analytic conditionals with L(s) = e^{-s I}.
OracleResult fading_oracle(const OrderedDistancePair& pair, double alpha, double t,
                           double i_const, std::uint64_t draws, std::uint64_t seed);

}  // namespace sircov
