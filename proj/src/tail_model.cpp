#include "heavytail/tail_model.hpp"

#include <cmath>
#include <stdexcept>

namespace heavytail {

TailParams::TailParams(double c_, double beta_, double lambda_, double gamma_)
    : c(c_), beta(beta_), lambda(lambda_), gamma(gamma_) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("TailParams: c must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("TailParams: lambda must be positive");
    if (!(gamma > 1.0) || !std::isfinite(gamma))
        throw std::invalid_argument("TailParams: gamma must be > 1");
    if (!std::isfinite(beta))
        throw std::invalid_argument("TailParams: beta must be finite");
    // Tail derivative sign on [1, inf) is beta - lambda*gamma*(log x)^(gamma-1),
    // maximized at x = 1 where it equals beta. beta > 0 would make the tail
    // increase just above 1, which no measure allows.
    if (beta > 0.0)
        throw std::invalid_argument(
            "TailParams: tail is increasing near x=1 (requires beta <= 0)");
}

double tail(const TailParams& p, double x) {
    if (!(x >= 1.0))
        throw std::domain_error("tail: x must be >= 1");
    double u = std::log(x);
    return std::exp(std::log(p.c) + p.beta * u - p.lambda * std::pow(u, p.gamma));
}

double r_eval(const TailParams& p, double u) {
    if (!(u >= 0.0))
        throw std::domain_error("r_eval: u must be >= 0");
    return p.lambda * std::pow(u, p.gamma) - p.beta * u - std::log(p.c);
}

double speed(const TailParams& p, std::int64_t n) {
    if (n < 2) throw std::invalid_argument("speed: n must be >= 2");
    double v = r_eval(p, std::log(static_cast<double>(n)));
    if (!(v > 0.0))
        throw std::invalid_argument("speed: r(log n) <= 0; n too small for these params");
    return v;
}

double q_n(const TailParams& p, std::int64_t n, double x) {
    if (n < 1) throw std::invalid_argument("q_n: n must be >= 1");
    return static_cast<double>(n) * tail(p, x);
}

double log_q_n(const TailParams& p, double n, double x) {
    if (!(n >= 1.0) || !(x >= 1.0))
        throw std::domain_error("log_q_n: need n >= 1, x >= 1");
    return std::log(n) - r_eval(p, std::log(x));
}

double q_n_inverse_bisect(const TailParams& p, std::int64_t n, double y) {
    if (!(y > 0.0)) throw std::domain_error("q_n_inverse: y must be > 0");
    double q1 = q_n(p, n, 1.0);
    if (y >= q1) return 1.0;
    double lo = 1.0, hi = 2.0;
    while (q_n(p, n, hi) >= y) {
        hi *= 2.0;
        if (hi > 1e300)
            throw std::runtime_error("q_n_inverse: bracket expansion failed");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (q_n(p, n, mid) >= y)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double q_n_inverse(const TailParams& p, std::int64_t n, double y) {
    if (!(y > 0.0)) throw std::domain_error("q_n_inverse: y must be > 0");
    if (p.beta != 0.0) return q_n_inverse_bisect(p, n, y);
    double q1 = q_n(p, n, 1.0);
    if (y >= q1) return 1.0;
    // c*n*exp(-lambda u^gamma) = y  =>  u = (log(cn/y)/lambda)^(1/gamma)
    double u = std::pow((std::log(p.c) + std::log(static_cast<double>(n)) - std::log(y)) / p.lambda,
                        1.0 / p.gamma);
    return std::exp(u);
}

double sample_tail_variable(const TailParams& p, Rng& rng) {
    double u = rng.uniform_pos();
    return q_n_inverse(p, 1, u * tail(p, 1.0));
}

} // namespace heavytail
