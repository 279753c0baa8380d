#pragma once

#include <cstdint>
#include <string>

#include "heavytail/rng.hpp"

namespace heavytail {

// Lognormal-type tail nu[x, inf) = c * x^beta * exp(-lambda * log^gamma x),
// equivalently exp(-r(log x)) with r(u) = lambda*u^gamma - beta*u - log c.
// The same object serves as the Levy measure restricted to [1, inf) and,
// normalized by tail(1), as the law of the big-jump variable Z.
//
// Admissibility: gamma > 1, lambda > 0, c > 0, and the tail must be
// nonincreasing on [1, inf). The derivative of the tail has the sign of
// beta - lambda*gamma*(log x)^(gamma-1); its supremum over x >= 1 is attained
// at x = 1 and equals beta, so nonincreasing on all of [1, inf) is exactly
// beta <= 0.
struct TailParams {
    double c;
    double beta;
    double lambda;
    double gamma;

    TailParams(double c_, double beta_, double lambda_, double gamma_);
};

// nu[x, inf) for x >= 1. Throws std::domain_error for x < 1: the sub-1
// regime belongs to the small-jump component of the simulator.
double tail(const TailParams& p, double x);

// r(u) = lambda*u^gamma - beta*u - log c, for u >= 0.
double r_eval(const TailParams& p, double u);

// The speed sequence a_n = r(log n); n >= 2 and the value must be positive.
double speed(const TailParams& p, std::int64_t n);

// Q_n(x) = n * nu[x, inf).
double q_n(const TailParams& p, std::int64_t n, double x);
// log Q_n(x), evaluated analytically (never under/overflows).
double log_q_n(const TailParams& p, double n, double x);

// Generalized inverse Q_n^{<-}(y) = inf{s > 0 : Q_n(s) < y}, with the
// convention that arguments y >= Q_n(1) clamp to 1 (jumps below 1 belong to
// the small-jump component). Closed form for beta = 0, bisection otherwise.
double q_n_inverse(const TailParams& p, std::int64_t n, double y);

// Bisection on [1, inf) regardless of beta; relative tolerance 1e-12,
// at most 200 iterations. Exposed so the closed form and the bracketing
// route can be cross-checked against each other.
double q_n_inverse_bisect(const TailParams& p, std::int64_t n, double y);

// Draw Z with P(Z >= x) = tail(x)/tail(1) for x >= 1 (inverse transform).
double sample_tail_variable(const TailParams& p, Rng& rng);

} // namespace heavytail
