#pragma once

#include <cstdint>
#include <vector>

#include "heavytail/levy.hpp"
#include "heavytail/metrics.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

// Parameters for the no-standard-LDP construction: the two-largest-jump map
// pi, the sets A_n, B_n, C_n, F_n and F = union of F_n for n >= N, where N is
// the smallest integer with log N - nu1*mu1/2 - N^(-1/3)/3 > 1.
struct CounterexampleParams {
    TailParams tail;
    MomentCache moments;
    std::int64_t threshold_n; // N

    explicit CounterexampleParams(const TailParams& t);
};

// Smallest admissible N, by upward scan (the left side is increasing in N).
std::int64_t n_threshold(const MomentCache& mom);

// Keep the two largest jumps at the earliest times attaining them; identity
// on paths with at most two jumps (a positive initial value counts as a jump
// at time 0). Requires nonnegative jumps.
StepPath pi_two_largest(const StepPath& p);

bool in_A_n(const StepPath& p, std::int64_t n);
bool in_B_n(const StepPath& p, std::int64_t n);
// sup-distance to the ramp t -> -mu1*nu1*t within n^(-1/3)/3.
bool in_C_n(const StepPath& p, std::int64_t n, const MomentCache& mom);
bool in_C_n(const GridPath& p, std::int64_t n, const MomentCache& mom);

// F-membership evaluated on the decomposed pair (Jbar in B_n, Hbar in C_n);
// n_used must be >= params.threshold_n.
bool in_F(std::int64_t n_used, const StepPath& j_component,
          const GridPath& h_component, const CounterexampleParams& params);

// --- Lemma "F closure avoids Dhat_{<=1}" evidence -------------------------

struct Lemma31Regime {
    double min_bound;  // min over the eta grid of the certified lower bound
    int eta_count;
};

struct Lemma31Point {
    std::int64_t n;
    Lemma31Regime late_v;  // eta jump time v > 1/2 (point-gap regime)
    Lemma31Regime early_v; // v <= 1/2 (flat-window regime)
};

struct Lemma31Report {
    std::vector<Lemma31Point> points;
    double overall_min;
};

// For sampled xi in F_n and a grid of one-jump candidates eta = z 1_{[v,1]},
// certify d_{M1'}(xi, eta) > 0 via the point-gap and flat-window lower
// bounds. v_grid_points controls grid density (doubling it is the
// refinement-stability check).
Lemma31Report lemma31_evidence(const CounterexampleParams& params,
                               const std::vector<std::int64_t>& n_list,
                               int samples_per_n, int v_grid_points,
                               std::uint64_t seed);

// A representative element of F_n: a two-jump B_n path plus a staircase
// approximation of the centering ramp (an explicit C_n member).
StepPath sample_f_n_element(const CounterexampleParams& params, std::int64_t n,
                            Rng& rng);

// --- Lemma "limsup log P(Xbar in F)/r(log n) > -2" experiment --------------

struct Lemma32Point {
    std::int64_t n;
    // analytic pieces of the lower bound on log P(Jbar in B_n)
    double term_iii;          // Q_n(n log n) / r(log n)               -> 0
    double term_iv;           // log(Q_n(n log n) - Q_n(2n log n)) / r(log n)
    double term_iv_matched;   // same numerator over r(log(n log n))   -> -1
    double term_v;            // log(1 - e^{-(Q_n(n^{2/3}) - Q_n(n log n))}) / r -> -(2/3)^gamma
    double log_uniform_const; // log(1/16): the two time windows
    // Monte Carlo piece
    double h_in_c_prob;       // P(Hbar_n in C_n)
    double combined_log_ratio; // full lower bound over r(log n)
};

struct Lemma32Report {
    double gamma;
    double analytic_target; // -1 - (2/3)^gamma
    std::vector<Lemma32Point> points;
};

// cfg supplies the Brownian/small-jump components of Hbar (with none, Hbar is
// deterministic and P(Hbar in C_n) = 1).
Lemma32Report lemma32_experiment(const LevyConfig& cfg,
                                 const std::vector<std::int64_t>& n_grid,
                                 std::int64_t trials, int resolution,
                                 std::uint64_t seed);

// Analytic terms only (no Monte Carlo); valid for astronomically large n
// since everything is evaluated in log space.
Lemma32Point lemma32_analytic_terms(const TailParams& tail, double n);

} // namespace heavytail
