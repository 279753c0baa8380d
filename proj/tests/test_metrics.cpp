#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heavytail/metrics.hpp"
#include "heavytail/rng.hpp"
#include "support/oracles.hpp"

using namespace heavytail;
namespace ht = heavytail::testing;

TEST_CASE("uniform distance") {
    StepPath a = StepPath::indicator(1.0, 0.5);
    StepPath zero;
    CHECK(uniform_distance(a, a) == 0.0);
    CHECK(uniform_distance(a, zero) == doctest::Approx(1.0));
    StepPath b = StepPath::indicator(2.0, 0.5);
    CHECK(uniform_distance(a, b) == doctest::Approx(1.0));
    StepPath c = StepPath::indicator(1.0, 0.6);
    CHECK(uniform_distance(a, c) == doctest::Approx(1.0));
}

TEST_CASE("j1 basic examples") {
    StepPath a = StepPath::indicator(1.0, 0.5);
    CHECK(j1_distance(a, a) == 0.0);
    StepPath b = StepPath::indicator(1.0, 0.6);
    CHECK(j1_distance(a, b) == doctest::Approx(0.1).epsilon(1e-4));
    // 1_{[0,1]} (a path with initial value 1) vs 1_{[0.1,1]}: lambda(0) = 0
    // pins the discrepancy at t = 0
    StepPath c = StepPath::indicator(1.0, 0.0);
    StepPath d = StepPath::indicator(1.0, 0.1);
    CHECK(j1_distance(c, d) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("j1 jumps at t = 1 cannot slide") {
    StepPath a = StepPath::indicator(1.0, 0.99);
    StepPath b = StepPath::indicator(1.0, 1.0);
    CHECK(j1_distance(a, b) == doctest::Approx(1.0).epsilon(1e-4));
    // but two jumps at exactly 1 match
    StepPath c = StepPath::indicator(1.0, 1.0);
    CHECK(j1_distance(b, c) == 0.0);
}

TEST_CASE("j1 against the exhaustive oracle") {
    Rng rng(42);
    ht::PathGenOptions opt;
    opt.max_jumps = 4;
    opt.positive_sizes = false;
    opt.allow_initial = true;
    opt.allow_jump_at_one = true;
    for (int trial = 0; trial < 300; ++trial) {
        StepPath p = ht::random_step_path(rng, opt);
        StepPath q = ht::random_step_path(rng, opt);
        double impl = j1_distance(p, q, 1e-7);
        double oracle = ht::j1_brute_force(p, q);
        CHECK(std::fabs(impl - oracle) < 2e-6);
    }
}

TEST_CASE("j1 against the literal grid search") {
    Rng rng(314);
    ht::PathGenOptions opt;
    opt.max_jumps = 3;
    for (int trial = 0; trial < 25; ++trial) {
        StepPath p = ht::random_step_path(rng, opt);
        StepPath q = ht::random_step_path(rng, opt);
        double impl = j1_distance(p, q, 1e-7);
        double grid = ht::j1_grid_search(p, q, 1e-3);
        CHECK(impl <= grid + 1e-6);     // the grid search is an upper bound
        CHECK(grid <= impl + 1.5e-3); // ... within one grid step
    }
}

TEST_CASE("m1prime upper bound basics") {
    StepPath a = StepPath::indicator(1.0, 0.5);
    CHECK(m1prime_upper(a, a, 1e-2) == doctest::Approx(0.0));
    // 1_{[0,1]} vs 1_{[0.1,1]}: both verticals traversed together, cost ~ 0.1
    StepPath c = StepPath::indicator(1.0, 0.0);
    StepPath d = StepPath::indicator(1.0, 0.1);
    CHECK(m1prime_upper(c, d, 1e-3) <= 0.1 + 2e-3);
    // 0 vs 1_{[0.5,1]}: matches the uniform bound
    StepPath zero;
    double up = m1prime_upper(zero, a, 1e-3);
    CHECK(up <= 1.0 + 2e-3);
    CHECK(up >= 1.0 - 1e-9);
}

TEST_CASE("m1prime pointgap lower bound") {
    StepPath a = StepPath::indicator(1.0, 0.5);
    StepPath zero;
    CHECK(m1prime_lower_pointgap(a, a, 1e-2) == doctest::Approx(0.0));
    // the corner (1, 0.5) is l-inf distance 1 from the zero graph
    CHECK(m1prime_lower_pointgap(zero, a, 1e-2) == doctest::Approx(1.0).epsilon(1e-9));
    StepPath b = StepPath::indicator(1.0, 0.8);
    CHECK(m1prime_lower_pointgap(a, b, 1e-3) >= 0.3 - 2e-3);
}

TEST_CASE("m1prime flat-window lower bound") {
    StepPath a = StepPath::indicator(1.0, 0.5);
    StepPath zero;
    CHECK(m1prime_lower_flatjump(a, a) == doctest::Approx(0.0));
    CHECK(m1prime_lower_flatjump(zero, a) == doctest::Approx(0.5));
    // p jumps early, q jumps late: the window around q's jump is limited by
    // the gap back to p's activity and by half of q's jump size
    StepPath p(0.0, {{0.1, 1.0}, {0.2, 0.5}});
    StepPath q = StepPath::indicator(1.0, 0.9);
    CHECK(m1prime_lower_flatjump(p, q) == doctest::Approx(0.5));
    StepPath q2 = StepPath::indicator(3.0, 0.9);
    CHECK(m1prime_lower_flatjump(p, q2) == doctest::Approx(0.7));
}

TEST_CASE("m1prime sandwich on the convergence family") {
    StepPath xi = StepPath::indicator(1.0, 0.0);
    for (int n = 2; n <= 64; n *= 2) {
        StepPath xi_n = StepPath::indicator(1.0, 1.0 / n);
        double up = m1prime_upper(xi, xi_n, 1e-3);
        double lo = std::max(m1prime_lower_pointgap(xi, xi_n, 1e-3),
                             m1prime_lower_flatjump(xi, xi_n));
        CHECK(up <= 1.0 / n + 2e-3);
        CHECK(lo <= up + 1e-12);
        CHECK(lo >= 1.0 / n - 2e-3); // the true distance is 1/n here
        CHECK(j1_distance(xi, xi_n) == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("metric ordering chain on random pairs") {
    Rng rng(777);
    ht::PathGenOptions opt;
    opt.max_jumps = 4;
    opt.positive_sizes = false;
    opt.allow_initial = true;
    const double density = 2e-3, j1tol = 1e-6;
    for (int trial = 0; trial < 60; ++trial) {
        StepPath p = ht::random_step_path(rng, opt);
        StepPath q = ht::random_step_path(rng, opt);
        double uni = uniform_distance(p, q);
        double j1 = j1_distance(p, q, j1tol);
        double up = m1prime_upper(p, q, density);
        double lo = std::max({m1prime_lower_pointgap(p, q, density),
                              m1prime_lower_flatjump(p, q),
                              m1prime_lower_flatjump(q, p)});
        CHECK(lo <= up + 1e-12);
        CHECK(up <= j1 + 2.0 * density + 2.0 * j1tol);
        CHECK(j1 <= uni + j1tol);
    }
}

TEST_CASE("symmetry and identity") {
    Rng rng(888);
    ht::PathGenOptions opt;
    opt.max_jumps = 3;
    opt.positive_sizes = false;
    for (int trial = 0; trial < 40; ++trial) {
        StepPath p = ht::random_step_path(rng, opt);
        StepPath q = ht::random_step_path(rng, opt);
        CHECK(j1_distance(p, p) == 0.0);
        CHECK(m1prime_upper(p, p, 5e-3) == 0.0);
        CHECK(std::fabs(j1_distance(p, q) - j1_distance(q, p)) < 3e-6);
        CHECK(m1prime_upper(p, q, 5e-3) ==
              doctest::Approx(m1prime_upper(q, p, 5e-3)).epsilon(1e-12));
        CHECK(m1prime_lower_pointgap(p, q, 5e-3) ==
              doctest::Approx(m1prime_lower_pointgap(q, p, 5e-3)));
    }
}

TEST_CASE("fattening distance") {
    StepPath p = StepPath::indicator(1.0, 0.5);
    StepPath q = StepPath::indicator(1.0, 0.6);
    std::vector<StepPath> fam{q};
    CHECK(fattening_distance(p, {p, q}, PathMetric::j1) == 0.0);
    CHECK(fattening_distance(p, fam, PathMetric::j1, 1e-6) ==
          doctest::Approx(0.1).epsilon(1e-3));
    // adding members never increases the infimum
    std::vector<StepPath> fam2{q, StepPath::indicator(1.0, 0.55)};
    CHECK(fattening_distance(p, fam2, PathMetric::j1, 1e-6) <=
          fattening_distance(p, fam, PathMetric::j1, 1e-6) + 1e-9);
    CHECK_THROWS_AS(fattening_distance(p, {}, PathMetric::j1), std::invalid_argument);
}
