#include "heavytail/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heavytail {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log1mexp(double x) {
    // x <= 0; log(1 - e^x).
    if (x >= 0.0) {
        if (x == 0.0) return kNegInf;
        throw std::domain_error("log1mexp: argument must be <= 0");
    }
    if (x > -0.6931471805599453) return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

double logsumexp(const std::vector<double>& v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

namespace {

// Series branch of the regularized lower incomplete gamma, in logs:
// P(a,x) = x^a e^{-x} / Gamma(a+1) * sum_{m>=0} x^m / prod_{i<=m}(a+i).
double log_gamma_p_series(int a, double x, double log_x) {
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 10000; ++m) {
        term *= x / (a + m);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return a * log_x - x - std::lgamma(a + 1.0) + std::log(sum);
}

// Continued fraction for Q(a,x) = 1 - P(a,x), valid for x >= a+1
// (modified Lentz).
double gamma_q_cf(int a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(static_cast<double>(a))) * h;
}

} // namespace

double log_gamma_p_from_log(int a, double log_x) {
    if (a < 1) throw std::invalid_argument("log_gamma_p: a must be >= 1");
    if (log_x == kNegInf) return kNegInf;
    // Deep asymptotic regime: P(a,x) = x^a/a! (1 + O(x)); corrections are
    // below double precision once x < 1e-18.
    if (log_x < -42.0) return a * log_x - std::lgamma(a + 1.0);
    double x = std::exp(log_x);
    if (x < a + 1.0) return log_gamma_p_series(a, x, log_x);
    double q = gamma_q_cf(a, x);
    if (q >= 1.0) return kNegInf;
    return std::log1p(-q);
}

double log_gamma_p(int a, double x) {
    if (x < 0.0) throw std::domain_error("log_gamma_p: x must be >= 0");
    if (x == 0.0) return kNegInf;
    return log_gamma_p_from_log(a, std::log(x));
}

double gamma_p(int a, double x) { return std::exp(log_gamma_p(a, x)); }

double gamma_p_inverse(int a, double p) {
    if (p <= 0.0 || p >= 1.0)
        throw std::domain_error("gamma_p_inverse: p must be in (0,1)");
    double log_p = std::log(p);
    // Bisect in log(x) so that quantiles deep in the left tail keep full
    // relative precision.
    double z_lo = std::min((log_p + std::lgamma(a + 1.0)) / a - 5.0, 0.0);
    double z_hi = std::log(2.0 * a + 10.0);
    while (log_gamma_p_from_log(a, z_hi) < log_p) z_hi += 2.0;
    while (log_gamma_p_from_log(a, z_lo) >= log_p) z_lo -= 5.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (z_lo + z_hi);
        if (log_gamma_p_from_log(a, mid) < log_p)
            z_lo = mid;
        else
            z_hi = mid;
        if (z_hi - z_lo <= 1e-14) break;
    }
    return std::exp(0.5 * (z_lo + z_hi));
}

double log_choose(double n, double k) {
    if (k < 0 || k > n) return kNegInf;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_binomial_tail_from_log(std::int64_t m, std::int64_t a, double log_y) {
    if (a <= 0) return 0.0;
    if (a > m || log_y == kNegInf) return kNegInf;
    if (log_y >= 0.0) return 0.0; // y >= 1
    double y = std::exp(log_y);
    double log_1my = (y < 1e-300) ? 0.0 : std::log1p(-y);
    double max_term = kNegInf;
    std::vector<double> terms;
    terms.reserve(64);
    for (std::int64_t j = a; j <= m; ++j) {
        double t = log_choose(static_cast<double>(m), static_cast<double>(j)) +
                   j * log_y + (m - j) * log_1my;
        terms.push_back(t);
        max_term = std::max(max_term, t);
        // Terms eventually decay geometrically; stop once negligible.
        if (t < max_term - 44.0 && j > a) break;
        if (terms.size() > 200000) break;
    }
    double s = logsumexp(terms);
    return std::min(s, 0.0);
}

double log_binomial_tail(std::int64_t m, std::int64_t a, double y) {
    if (y <= 0.0) return (a <= 0) ? 0.0 : kNegInf;
    if (y >= 1.0) return 0.0;
    return log_binomial_tail_from_log(m, a, std::log(y));
}

BinomCI binom_ci(std::int64_t hits, std::int64_t trials, double confidence) {
    if (trials <= 0 || hits < 0 || hits > trials)
        throw std::invalid_argument("binom_ci: bad counts");
    double alpha = 1.0 - confidence;
    double log_half_alpha = std::log(alpha / 2.0);
    BinomCI ci{0.0, 1.0};
    // Upper bound: smallest p with P(Bin(n,p) <= hits) <= alpha/2,
    // i.e. P(Bin >= hits+1) >= 1 - alpha/2.
    if (hits < trials) {
        double lo = static_cast<double>(hits) / trials, hi = 1.0;
        double target = std::log1p(-alpha / 2.0);
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (log_binomial_tail(trials, hits + 1, mid) >= target)
                hi = mid;
            else
                lo = mid;
        }
        ci.high = hi;
    }
    // Lower bound: largest p with P(Bin(n,p) >= hits) <= alpha/2.
    if (hits > 0) {
        double lo = 0.0, hi = static_cast<double>(hits) / trials;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (log_binomial_tail(trials, hits, mid) <= log_half_alpha)
                lo = mid;
            else
                hi = mid;
        }
        ci.low = lo;
    }
    return ci;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (a == b) return 0.0;
    // Coarse scan to scale the absolute tolerance.
    double scale = 0.0;
    const int kScan = 32;
    for (int i = 0; i <= kScan; ++i) {
        double x = a + (b - a) * i / kScan;
        scale = std::max(scale, std::fabs(f(x)));
    }
    double abs_tol = std::max(scale * std::fabs(b - a) * rel_tol, 1e-305);
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(a, fa, b, fb, fm);
    return adaptive(f, a, fa, b, fb, m, fm, whole, abs_tol, 48);
}

} // namespace heavytail
