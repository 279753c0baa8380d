#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heavytail/levy.hpp"
#include "heavytail/special_functions.hpp"
#include "support/oracles.hpp"

using namespace heavytail;
namespace ht = heavytail::testing;

namespace {
const TailParams ref(1.0, 0.0, 1.0, 2.0);

double mu1_closed_form() {
    // 1 + e^{1/4} (sqrt(pi)/2) (1 + erf(1/2)) for the reference tail
    return 1.0 + std::exp(0.25) * (std::sqrt(M_PI) / 2.0) * (1.0 + std::erf(0.5));
}
} // namespace

TEST_CASE("moments against the closed form") {
    MomentCache m = moments(ref);
    CHECK(m.nu1 == doctest::Approx(1.0));
    CHECK(m.mu1 == doctest::Approx(mu1_closed_form()).epsilon(1e-8));
    CHECK(m.mu1 == doctest::Approx(2.7302).epsilon(1e-4));
    // the prefactor cancels in the normalized mean
    TailParams two(2.0, 0.0, 1.0, 2.0);
    MomentCache m2 = moments(two);
    CHECK(m2.nu1 == doctest::Approx(2.0));
    CHECK(m2.mu1 == doctest::Approx(m.mu1).epsilon(1e-10));
}

TEST_CASE("small jump spec") {
    SmallJumpSpec s(0.5, 0.5);
    CHECK(s.finite_activity());
    CHECK(s.mass_above(0.0) == doctest::Approx(1.0));
    CHECK(s.mean_above(0.0) == doctest::Approx(0.5 / 1.5));
    CHECK(s.x2_integral(0.0, 1.0) == doctest::Approx(0.2));
    CHECK_THROWS_AS(SmallJumpSpec(1.0, 3.2), std::invalid_argument);
    CHECK_NOTHROW(SmallJumpSpec(1.0, 1.5)); // infinite activity, finite x^2
}

TEST_CASE("gamma-uniform coupling basics") {
    Rng rng(11);
    const int trials = 100000;
    double sum1 = 0.0, sum3 = 0.0;
    int below = 0;
    for (int t = 0; t < trials; ++t) {
        BigJumpDraw d = sample_gamma_uniform(3, rng);
        CHECK(d.gammas[0] < d.gammas[1]);
        CHECK(d.gammas[1] < d.gammas[2]);
        sum1 += d.gammas[0];
        sum3 += d.gammas[2];
        if (d.gammas[0] <= 1.0) ++below;
    }
    // E[Gamma_i] = i within 3 sigma (Var Gamma_i = i)
    CHECK(std::fabs(sum1 / trials - 1.0) < 3.0 * std::sqrt(1.0 / trials));
    CHECK(std::fabs(sum3 / trials - 3.0) < 3.0 * std::sqrt(3.0 / trials));
    // P(Gamma_1 <= 1) = 1 - e^{-1}
    double p = 1.0 - std::exp(-1.0);
    CHECK(std::fabs(static_cast<double>(below) / trials - p) <
          3.0 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("largest jump law of j_hat") {
    Rng rng(22);
    const std::int64_t n = 50;
    const int trials = 100000;
    double x = 0.2; // raw size threshold n*x = 10
    int hits = 0;
    std::vector<double> times;
    for (int t = 0; t < trials; ++t) {
        BigJumpDraw d = make_big_jump_draw(ref, n, 1, rng);
        StepPath jh = sample_j_hat_k(ref, n, 1, d);
        REQUIRE(jh.jump_count() == 1);
        if (jh.jumps()[0].size >= x) ++hits;
        times.push_back(jh.jumps()[0].time);
    }
    // P(size >= x) = P(Gamma_1 <= Q_n(nx)) = 1 - exp(-Q_n(nx))
    double p = 1.0 - std::exp(-q_n(ref, n, n * x));
    double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::fabs(static_cast<double>(hits) / trials - p) < 3.5 * sigma);
    // jump times are uniform: KS within the DKW band at alpha = 1e-6
    CHECK(ht::ks_uniform(times) < ht::dkw_epsilon(times.size(), 1e-6));
}

TEST_CASE("erlang-2 law of the second size") {
    Rng rng(23);
    const std::int64_t n = 50;
    const int trials = 50000;
    double x = 0.12;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        JumpVector v = sample_k_jump_sizes(ref, n, 2, rng);
        CHECK(v.sizes[0] >= v.sizes[1]);
        if (v.sizes[1] >= x) ++hits;
    }
    double p = gamma_p(2, q_n(ref, n, n * x));
    double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::fabs(static_cast<double>(hits) / trials - p) < 3.5 * sigma);
}

TEST_CASE("j_check cancels exactly the clamped jumps") {
    Rng rng(33);
    // sparse big-jump intensity so that n_tilde < k happens often
    TailParams sparse(0.1, 0.0, 1.0, 2.0);
    const std::int64_t n = 30;
    const int k = 4;
    int nontrivial = 0;
    for (int t = 0; t < 2000; ++t) {
        BigJumpDraw d = make_big_jump_draw(sparse, n, k, rng);
        StepPath jh = sample_j_hat_k(sparse, n, k, d);
        StepPath jc = sample_j_check_k(sparse, n, k, d);
        StepPath sum = jh + jc;
        if (jc.jump_count() > 0) ++nontrivial;
        // every surviving jump has raw size >= 1 (scaled > 1/n up to the
        // boundary), and the count matches min(k, n_tilde)
        int expected = std::min(k, d.n_tilde);
        CHECK(sum.jump_count() <= expected); // time collisions can merge
        for (const Jump& j : sum.jumps())
            CHECK(j.size * static_cast<double>(n) >= 1.0 - 1e-12);
        // all raw sizes >= 1 means the check part vanishes
        if (d.n_tilde >= k) CHECK(jc.jump_count() == 0);
    }
    CHECK(nontrivial > 500); // P(Poisson(3) < 4) is about 0.65
}

TEST_CASE("n_tilde is Poisson(n nu1)") {
    Rng rng(44);
    const std::int64_t n = 50;
    const int k = 3;
    const int trials = 200000;
    int below_k = 0;
    for (int t = 0; t < trials; ++t) {
        BigJumpDraw d = make_big_jump_draw(ref, n, k, rng);
        if (d.n_tilde < k) ++below_k;
    }
    // P(Poisson(50) < 3) = e^{-50}(1 + 50 + 1250): about 2.5e-19; with 2e5
    // trials we should see none
    CHECK(below_k == 0);
    // sharper check at small n: P(Poisson(2) < 3)
    const std::int64_t n2 = 2;
    int below2 = 0;
    for (int t = 0; t < trials; ++t) {
        BigJumpDraw d = make_big_jump_draw(ref, n2, k, rng);
        if (d.n_tilde < k) ++below2;
    }
    double p = std::exp(-2.0) * (1.0 + 2.0 + 2.0);
    double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::fabs(static_cast<double>(below2) / trials - p) < 3.5 * sigma);
}

TEST_CASE("h_bar centering and truncation") {
    Rng rng(55);
    MomentCache mom = moments(ref);
    const std::int64_t n = 40;
    const int trials = 100000;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        BigJumpDraw d = make_big_jump_draw(ref, n, 0, rng);
        GridPath h = sample_h_bar_k(ref, mom, n, 0, 64, d);
        acc += h.values.back();
    }
    // E[Hbar^{<=0}(1)] = 0; Var is ~ nu1 E[Z^2]/n per trial
    double var = big_jump_second_moment(ref) / static_cast<double>(n);
    CHECK(std::fabs(acc / trials) < 3.5 * std::sqrt(var / trials));

    // k >= N(n): pure count drift
    BigJumpDraw d = make_big_jump_draw(ref, 5, 0, rng);
    GridPath h = sample_h_bar_k(ref, mom, 5, d.n_tilde, 64, d);
    for (int j = 0; j <= 64; ++j) {
        double expect = -mom.mu1 / 5.0 * 0.0; // recomputed below
        (void)expect;
    }
    // the path must be non-increasing steps of size mu1/n at the jump times
    for (int j = 1; j <= 64; ++j)
        CHECK(h.values[j] <= h.values[j - 1] + 1e-15);

    // Stripping more of the largest jumps kills the upper excursions: the
    // exceedance probability of sup_t Hbar^{<=k}(t) drops sharply in k. (The
    // two-sided sup is dominated at desk scale by the -mu1-per-arrival
    // centering, which grows with k; the lemma's mechanism is one-sided.)
    const std::int64_t n3 = 100;
    auto upper_tail = [&](int k) {
        Rng r2(5550);
        int hits = 0;
        const int tr = 40000;
        for (int t = 0; t < tr; ++t) {
            BigJumpDraw dd = make_big_jump_draw(ref, n3, k, r2);
            GridPath hh = sample_h_bar_k(ref, mom, n3, k, 64, dd);
            double sup = 0.0;
            for (double v : hh.values) sup = std::max(sup, v);
            if (sup > 0.25) ++hits;
        }
        return static_cast<double>(hits) / tr;
    };
    double s0 = upper_tail(0), s2 = upper_tail(2), s5 = upper_tail(5);
    CHECK(s2 < 0.5 * s0);
    CHECK(s5 < 0.5 * s2);
}

TEST_CASE("r_bar variance scaling and brownian sup") {
    MomentCache mom = moments(ref);
    LevyConfig cfg(ref);
    // a = 0, no small jumps: Rbar(1) = mu1 (N(n)/n - nu1)
    {
        Rng rng(66);
        const int trials = 100000;
        auto var_at = [&](std::int64_t n) {
            Rng r(66);
            double s = 0.0, s2 = 0.0;
            for (int t = 0; t < trials; ++t) {
                BigJumpDraw d = make_big_jump_draw(ref, n, 0, r);
                GridPath rb = sample_r_bar(cfg, mom, n, 32, d, r);
                double v = rb.values.back();
                s += v;
                s2 += v * v;
            }
            double mean = s / trials;
            return s2 / trials - mean * mean;
        };
        double v1 = var_at(32), v4 = var_at(128);
        CHECK(std::fabs(v1 / (mom.mu1 * mom.mu1 * mom.nu1 / 32.0) - 1.0) < 0.1);
        CHECK(v1 / v4 > 3.0);
        CHECK(v1 / v4 < 5.0);
        // mean zero at t = 1
        Rng r3(67);
        double s = 0.0;
        for (int t = 0; t < trials; ++t) {
            BigJumpDraw d = make_big_jump_draw(ref, 32, 0, r3);
            GridPath rb = sample_r_bar(cfg, mom, 32, 32, d, r3);
            s += rb.values.back();
        }
        CHECK(std::fabs(s / trials) < 3.5 * std::sqrt(v1 / trials));
    }
    // Brownian-only config: P(sup |a B(nt)/n| > 0.1) tiny at n = 1e4
    {
        LevyConfig bcfg(ref);
        bcfg.a = 1.0;
        Rng rng(68);
        int hits = 0;
        const int trials = 2000;
        for (int t = 0; t < trials; ++t) {
            BigJumpDraw empty;
            GridPath rb = sample_r_bar(bcfg, mom, 10000, 256, empty, rng);
            double sup = 0.0;
            for (int j = 0; j <= 256; ++j) {
                double v = rb.values[j] + rb.time_at(j) * mom.nu1 * mom.mu1;
                sup = std::max(sup, std::fabs(v));
            }
            if (sup > 0.1) ++hits;
        }
        CHECK(static_cast<double>(hits) / trials < 0.01);
    }
}

TEST_CASE("decomposition sums exactly and is k-invariant") {
    MomentCache mom = moments(ref);
    LevyConfig cfg(ref);
    cfg.a = 0.3;
    cfg.small_jump = SmallJumpSpec(0.5, 0.5);
    Rng rng(99);
    const int m = 64;
    for (int t = 0; t < 200; ++t) {
        XBarSample s = sample_x_bar(cfg, mom, 25, 3, m, rng);
        for (int j = 0; j <= m; ++j) {
            double tt = static_cast<double>(j) / m;
            double sum = s.j_hat.value(tt) + s.j_check.value(tt) +
                         s.h_bar.values[j] + s.r_bar.values[j];
            CHECK(s.total.values[j] == doctest::Approx(sum).epsilon(1e-12));
        }
    }
    // E[Xbar_n(1)] = 0
    const int trials = 40000;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        XBarSample s = sample_x_bar(cfg, mom, 25, 3, 16, rng);
        acc += s.total.values.back();
    }
    double var = (big_jump_second_moment(ref) * mom.nu1 + cfg.a * cfg.a +
                  cfg.small_jump->x2_integral(0.0, 1.0)) /
                 25.0;
    CHECK(std::fabs(acc / trials) < 4.0 * std::sqrt(var / trials));

    // k only re-partitions jumps: KS of Xbar(1) samples for k=2 vs k=5
    std::vector<double> a, b;
    Rng r1(123), r2(321);
    for (int t = 0; t < 10000; ++t) {
        a.push_back(sample_x_bar(cfg, mom, 25, 2, 16, r1).total.values.back());
        b.push_back(sample_x_bar(cfg, mom, 25, 5, 16, r2).total.values.back());
    }
    CHECK(ht::ks_two_sample(a, b) < ht::ks_two_sample_threshold(a.size(), b.size(), 0.01));
}

TEST_CASE("y_bar split vs direct compound poisson") {
    MomentCache mom = moments(ref);
    Rng rng(1112);
    const std::int64_t n = 30;
    std::vector<double> split, direct;
    for (int t = 0; t < 10000; ++t) {
        XBarSample s = sample_x_bar(LevyConfig(ref), mom, n, 3, 16, rng);
        // Ybar(1) = Jhat + Jcheck + Hbar at t = 1
        split.push_back(s.j_hat.value(1.0) + s.j_check.value(1.0) +
                        s.h_bar.values.back());
    }
    for (int t = 0; t < 10000; ++t) {
        std::int64_t cnt = rng.poisson(static_cast<double>(n) * mom.nu1);
        double sum = 0.0;
        for (std::int64_t i = 0; i < cnt; ++i)
            sum += sample_tail_variable(ref, rng) - mom.mu1;
        direct.push_back(sum / static_cast<double>(n));
    }
    CHECK(ht::ks_two_sample(split, direct) <
          ht::ks_two_sample_threshold(split.size(), direct.size(), 0.01));
}

TEST_CASE("random walk representations") {
    MomentCache mom = moments(ref);
    Rng rng(2223);
    const std::int64_t n = 64;
    StepPath w = sample_w_bar(ref, mom, n, rng);
    REQUIRE(w.jump_count() == n);
    for (int i = 0; i < n; ++i)
        CHECK(w.jumps()[i].time ==
              doctest::Approx(static_cast<double>(i + 1) / n).epsilon(1e-15));

    StepPath s = sample_s_bar(ref, mom, n, rng);
    CHECK(s.jumps().back().time == 1.0);

    // Wbar(1) and Sbar(1) agree in distribution
    std::vector<double> wa, sa;
    for (int t = 0; t < 10000; ++t) {
        wa.push_back(sample_w_bar(ref, mom, n, rng).final_value());
        sa.push_back(sample_s_bar(ref, mom, n, rng).final_value());
    }
    CHECK(ht::ks_two_sample(wa, sa) <
          ht::ks_two_sample_threshold(wa.size(), sa.size(), 0.01));
}

TEST_CASE("coupled walk pair displacement bound") {
    MomentCache mom = moments(ref);
    Rng rng(3334);
    const std::int64_t n = 128;
    int band_violations = 0;
    const int trials = 10000;
    double dkw = ht::dkw_epsilon(n - 1, 1e-4);
    for (int t = 0; t < trials; ++t) {
        CoupledWalkPair cp = sample_w_s_coupled(ref, mom, n, rng);
        CHECK(cp.w_bar.final_value() ==
              doctest::Approx(cp.s_bar.final_value()).epsilon(1e-9));
        if (cp.max_time_displacement > dkw + 1.0 / n) ++band_violations;
    }
    // DKW: P(sup > eps) <= 2 exp(-2 eps^2 (n-1)) = 1e-4 at this band
    CHECK(band_violations <= 5);
}

TEST_CASE("rw order statistics moments") {
    Rng rng(4445);
    const std::int64_t n = 200;
    const int trials = 50000;
    // V_(2) ~ Beta(2, n-2): E = 2/n
    // reconstruct V from the size: Qt(size * n) = V
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        JumpVector v = sample_k_jump_sizes_rw(ref, n, 2, rng);
        CHECK(v.sizes[0] >= v.sizes[1]);
        double raw = v.sizes[1] * static_cast<double>(n);
        acc += tail(ref, raw) / tail(ref, 1.0);
    }
    double mean = acc / trials;
    double expect = 2.0 / static_cast<double>(n);
    double sd = std::sqrt(expect * (1.0 - expect) / trials); // crude bound on se
    CHECK(std::fabs(mean - expect) < 5.0 * sd);
    CHECK_THROWS_AS(sample_k_jump_sizes_rw(ref, 3, 3, rng), std::invalid_argument);
}

TEST_CASE("determinism") {
    MomentCache mom = moments(ref);
    LevyConfig cfg(ref);
    cfg.a = 0.2;
    Rng a(1234), b(1234);
    for (int t = 0; t < 20; ++t) {
        XBarSample sa = sample_x_bar(cfg, mom, 40, 3, 64, a);
        XBarSample sb = sample_x_bar(cfg, mom, 40, 3, 64, b);
        REQUIRE(sa.total.values.size() == sb.total.values.size());
        for (size_t j = 0; j < sa.total.values.size(); ++j)
            CHECK(sa.total.values[j] == sb.total.values[j]);
    }
}
