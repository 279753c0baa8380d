#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heavytail/levy.hpp"
#include "heavytail/rates.hpp"

namespace heavytail {

// Worker count for trial partitioning. Trials are split into fixed chunks
// seeded by (seed, chunk index), so results do not depend on this setting.
void set_thread_count(int threads);
int thread_count();

struct SamplerSpec {
    LevyConfig cfg;
    int k = 3;
    int resolution = 256;
};

// Named, parameterized event over a path sample or a jump-size vector.
struct EventSpec {
    std::string name;
    std::map<std::string, double> params;
    std::function<bool(const XBarSample&)> path_pred;
    std::function<bool(const JumpVector&)> vector_pred;
    // Per-coordinate rectangle for jump-vector events (lo, hi); hi may be inf.
    std::optional<std::vector<std::pair<double, double>>> rectangle;
    // Size threshold used by the big-jump conditioned estimator.
    std::optional<double> conditioning_threshold;
    std::optional<RateValue> analytic_inner_rate;
    std::optional<RateValue> analytic_outer_rate;

    void validate() const;
};

struct EstimateResult {
    std::int64_t n = 0;
    std::int64_t trials = 0;
    double hits = 0.0; // effective (weighted) hit mass
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double log_ratio = 0.0; // log(p_hat) / speed(n); NaN when p_hat == 0
    std::string estimator;  // "plain" | "conditioned" | "exact"
    bool zero_hits = false;
};

struct LdpReport {
    std::string event_name;
    std::vector<EstimateResult> results;
    double terminal_log_ratio = 0.0;
    double band_low = 0.0;  // -inner_rate - tol
    double band_high = 0.0; // -outer_rate + tol
    bool monotone_log_prob = false; // log p_hat strictly decreasing over grid
    std::string verdict;            // "consistent" | "inconsistent" | "inconclusive"
};

EstimateResult estimate_plain(const EventSpec& event, const SamplerSpec& sampler,
                              std::int64_t n, std::int64_t trials,
                              std::uint64_t seed);

// Exact two-stratum estimator: trials are split between {Gamma_j <= Q_n(n
// theta)} and its complement, each sampled from its exact conditional law and
// weighted by the exact stratum probability. Unbiased for P(event); the
// conditioned stratum carries the big-jump configurations. j = 0 falls back
// to estimate_plain.
EstimateResult estimate_big_jump_conditioned(const EventSpec& event,
                                             const SamplerSpec& sampler,
                                             std::int64_t n, int j,
                                             std::int64_t trials,
                                             std::uint64_t seed);

// Exact probability that (Qn^{<-}(Gamma_1)/n, ..., Qn^{<-}(Gamma_k)/n) lies in
// the rectangle (per-coordinate [lo, hi], hi may be inf), by mapping to
// Gamma-space boxes and integrating the ordered-exponential density with
// nested quadrature.
double exact_jump_vector_prob(const TailParams& tail, std::int64_t n,
                              const std::vector<std::pair<double, double>>& rect,
                              int k);

// log P(size_i >= x) = log P(Gamma_i <= Q_n(nx)); stable at any n.
double log_prob_jump_threshold(const TailParams& tail, std::int64_t n, int i,
                               double x);

struct SlopeCheckOptions {
    double band_tolerance = 0.5;
    int conditioning_jumps = 0; // 0 = plain MC (or exact when available)
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
};

// Trajectory of log-ratios over the n grid for one event family, with the
// verdict against the [-inner, -outer] band.
LdpReport ldp_slope_check(const EventSpec& event, const SamplerSpec& sampler,
                          const std::vector<std::int64_t>& n_grid,
                          const SlopeCheckOptions& opt);

struct OneBigJumpPoint {
    std::int64_t n;
    double ratio; // p_hat(X(n) > x) / (n * p_hat(X(1) > x))
    double ci_low, ci_high;
    bool in_regime;
};
struct OneBigJumpReport {
    double x;
    double p1_hat; // P(X(1) > x)
    std::vector<OneBigJumpPoint> points;
};

OneBigJumpReport one_big_jump_check(const LevyConfig& cfg, double x,
                                    const std::vector<std::int64_t>& n_grid,
                                    std::int64_t trials, std::uint64_t seed);

// Numeric compound-Poisson tail P(X(t) > x) for the big-jump part (centered),
// by Panjer recursion on a lattice of width h.
double compound_poisson_tail(const TailParams& tail, double t, double x, double h);

struct TruncatedSumPoint {
    std::int64_t n;
    double log_ratio;          // log max_j P(sum (Y - EZ) > n eps) / speed(n)
    double log_ratio_reversed; // same for sum (EZ - Y) > n eps
};
struct TruncatedSumReport {
    double delta, eps;
    int m_factor;
    double bound; // -eps / (2 delta)
    std::vector<TruncatedSumPoint> points;
};

// Tilted-importance-sampling estimate of the truncated-sum deviation
// probabilities (exact likelihood ratios w.r.t. the tabulated sampler).
TruncatedSumReport truncated_sum_tail_check(const TailParams& tail, double delta,
                                            double eps, int m_factor,
                                            const std::vector<std::int64_t>& n_grid,
                                            std::int64_t trials, std::uint64_t seed);

// Empirical check of Etemadi's inequality on precomputed partial-sum samples
// (trials x n matrix of S_1..S_n): freq(max_k |S_k| >= 3x) <= 3 max_k
// freq(|S_k| >= x) + CI slack.
bool etemadi_oracle(const std::vector<std::vector<double>>& partial_sums, double x);

// Empirical check of Bernstein's inequality on samples (trials x n matrix of
// the X_i themselves, each <= b): freq(S >= t) <= exp(-t^2/(2(v + b t / 3)))
// + CI slack. Throws if a sample exceeds b.
bool bernstein_oracle(const std::vector<std::vector<double>>& samples, double b,
                      double t);

struct ProductCoordinate {
    TailParams tail;
    double lambda;
    int jump_index; // event {size_{jump_index} >= x}; 0 = always true
    double x;
};
struct ProductLdpPoint {
    std::int64_t n;
    double log_ratio; // (sum_i log P_i) / log^gamma n
};
struct ProductLdpReport {
    double target; // -sum lambda_i * j_i
    std::vector<ProductLdpPoint> points;
};

// Product-space additivity check with exact per-coordinate probabilities.
ProductLdpReport product_ldp_check(const std::vector<ProductCoordinate>& coords,
                                   double gamma,
                                   const std::vector<std::int64_t>& n_grid);

} // namespace heavytail
