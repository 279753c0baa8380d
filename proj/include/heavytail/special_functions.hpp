#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace heavytail {

// log(1 - e^x) for x < 0, stable for x near 0 and very negative x.
double log1mexp(double x);

// log(sum of exp(v))
double logsumexp(const std::vector<double>& v);

// Regularized lower incomplete gamma P(a, x) for integer a >= 1 (the
// Erlang-a CDF at x), returned as a log. Stable down to log(x) ~ -700 via
// log_gamma_p_from_log, which takes log(x) directly and never forms x when
// the asymptotic branch applies.
double log_gamma_p(int a, double x);
double log_gamma_p_from_log(int a, double log_x);

// P(a, x) in linear space (exp of the above).
double gamma_p(int a, double x);

// Inverse of x -> P(a, x) on [0, inf): smallest x with P(a,x) >= p.
double gamma_p_inverse(int a, double p);

// log C(n, k) via lgamma.
double log_choose(double n, double k);

// log P(Binomial(m, y) >= a), with log(y) supplied for tiny-y stability.
// This is also the CDF of the a-th smallest of m iid uniforms at y.
double log_binomial_tail_from_log(std::int64_t m, std::int64_t a, double log_y);
double log_binomial_tail(std::int64_t m, std::int64_t a, double y);

// Exact (Clopper-Pearson) two-sided binomial confidence interval.
struct BinomCI {
    double low;
    double high;
};
BinomCI binom_ci(std::int64_t hits, std::int64_t trials, double confidence);

// Standard normal CDF.
double normal_cdf(double x);

// Adaptive Simpson quadrature on [a, b] with relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9);

} // namespace heavytail
