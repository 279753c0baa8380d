#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "heavytail/rng.hpp"
#include "heavytail/step_path.hpp"
#include "heavytail/tail_model.hpp"

namespace heavytail {

// Small-jump Levy density kappa * x^(-alpha) on (0,1); finite activity for
// alpha < 1, infinite activity (but finite x^2-integral) for alpha in [1, 3).
struct SmallJumpSpec {
    double kappa;
    double alpha;

    SmallJumpSpec(double kappa_, double alpha_);

    bool finite_activity() const { return alpha < 1.0; }
    double mass_above(double theta) const;        // integral of nu_s over (theta,1)
    double mean_above(double theta) const;        // integral of x nu_s over (theta,1)
    double x2_integral(double lo, double hi) const;
    double sample_size(double theta, Rng& rng) const; // inverse CDF on (theta,1)
};

struct LevyConfig {
    TailParams tail;
    double a = 0.0; // Brownian coefficient
    double b = 0.0; // drift (cancelled by the centering; kept for completeness)
    std::optional<SmallJumpSpec> small_jump;

    explicit LevyConfig(TailParams t) : tail(t) {}
};

struct MomentCache {
    double nu1; // nu[1, inf) = tail(1)
    double mu1; // mean of the normalized big-jump law
};

// nu1 = tail(1); mu1 = 1 + (1/nu1) * integral_1^inf tail(x) dx, by adaptive
// quadrature (relative 1e-8 or better).
MomentCache moments(const TailParams& tail);
// Second moment of the normalized big-jump law (test oracle for Bernstein).
double big_jump_second_moment(const TailParams& tail);

// One realization of the Gamma/U coupling: Gamma_i are Exp(1) partial sums,
// U_i iid uniform, generated past both k_min entries and the last index with
// Gamma_i <= n*nu1. n_tilde counts point masses with raw size >= 1.
struct BigJumpDraw {
    std::vector<double> gammas;
    std::vector<double> uniforms;
    int n_tilde = 0;
    // importance weight of the stratum this draw was sampled from (1 for
    // unconditioned draws)
    double stratum_log_prob = 0.0;
};

BigJumpDraw make_big_jump_draw(const TailParams& tail, std::int64_t n, int k_min,
                               Rng& rng);

// Same, conditioned on {Gamma_j <= g} (stratum = true) or {Gamma_j > g}
// (stratum = false); exact sampling via a truncated Erlang-j draw plus
// uniform order statistics, the Markov property filling in the rest.
BigJumpDraw make_conditioned_big_jump_draw(const TailParams& tail, std::int64_t n,
                                           int j, double g, bool below, int k_min,
                                           Rng& rng);

// (gammas, uniforms) of length k, unconditioned; the raw coupling primitive.
BigJumpDraw sample_gamma_uniform(int k, Rng& rng);

// Jhat_n^{<=k}: (1/n) sum_{i<=k} Qn^{<-}(Gamma_i) 1_{[U_i,1]}. Jumps whose
// inverse clamps at 1 appear with raw size 1.
StepPath sample_j_hat_k(const TailParams& tail, std::int64_t n, int k,
                        const BigJumpDraw& draw);

// Jcheck_n^{<=k}: cancels the clamped jumps of Jhat (indices above n_tilde).
StepPath sample_j_check_k(const TailParams& tail, std::int64_t n, int k,
                          const BigJumpDraw& draw);

// Hbar_n^{<=k}: remaining (rank > k) big jumps, centered by mu1 per arrival,
// sampled on a uniform grid.
GridPath sample_h_bar_k(const TailParams& tail, const MomentCache& mom,
                        std::int64_t n, int k, int resolution,
                        const BigJumpDraw& draw);

// Rbar_n: Brownian part, compensated small jumps, and the mu1-count term from
// the coupled draw.
GridPath sample_r_bar(const LevyConfig& cfg, const MomentCache& mom,
                      std::int64_t n, int resolution, const BigJumpDraw& draw,
                      Rng& rng);

struct XBarSample {
    BigJumpDraw draw;
    StepPath j_hat;
    StepPath j_check;
    GridPath h_bar;
    GridPath r_bar;
    GridPath total;
    double max_cp_jump = 0.0; // largest (scaled) compound-Poisson jump
};

XBarSample sample_x_bar(const LevyConfig& cfg, const MomentCache& mom,
                        std::int64_t n, int k, int resolution, Rng& rng);
// As above but with a supplied big-jump draw (used by the conditioned
// estimator).
XBarSample sample_x_bar_with_draw(const LevyConfig& cfg, const MomentCache& mom,
                                  std::int64_t n, int k, int resolution,
                                  BigJumpDraw draw, Rng& rng);

// Scaled centered random walk Wbar_n: jumps at i/n of size (Z_i - EZ)/n.
StepPath sample_w_bar(const TailParams& tail, const MomentCache& mom,
                      std::int64_t n, Rng& rng);

// Sbar_n: n-1 jumps at iid uniform times plus a terminal jump at t = 1.
StepPath sample_s_bar(const TailParams& tail, const MomentCache& mom,
                      std::int64_t n, Rng& rng);

// Coupled pair (same increments, Wbar at the rank grid of Sbar's times),
// plus the maximal time displacement sup_i |U_(i) - i/n|.
struct CoupledWalkPair {
    StepPath w_bar;
    StepPath s_bar;
    double max_time_displacement;
};
CoupledWalkPair sample_w_s_coupled(const TailParams& tail, const MomentCache& mom,
                                   std::int64_t n, Rng& rng);

struct JumpVector {
    std::vector<double> sizes; // nonincreasing
    std::vector<double> times;
};

// Levy variant: sizes_i = Qn^{<-}(Gamma_i)/n.
JumpVector sample_k_jump_sizes(const TailParams& tail, std::int64_t n, int k,
                               Rng& rng);
// Random-walk variant: sizes_i = Qt^{<-}(V_(i))/n with V_(i) the i-th
// smallest of n-1 uniforms (sequential beta recursion; k <= n-1).
JumpVector sample_k_jump_sizes_rw(const TailParams& tail, std::int64_t n, int k,
                                  Rng& rng);

// Endpoint of the centered unscaled process X(t) (compound Poisson big jumps
// minus t*nu1*mu1, plus Brownian and compensated small-jump parts).
double sample_x_endpoint(const LevyConfig& cfg, const MomentCache& mom, double t,
                         Rng& rng);

} // namespace heavytail
