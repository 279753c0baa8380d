#include "heavytail/levy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heavytail/special_functions.hpp"

namespace heavytail {

SmallJumpSpec::SmallJumpSpec(double kappa_, double alpha_)
    : kappa(kappa_), alpha(alpha_) {
    if (!(kappa > 0.0)) throw std::invalid_argument("SmallJumpSpec: kappa must be > 0");
    // The x^2 integral must be finite; probe it numerically on a shrinking
    // sequence of cutoffs and require convergence.
    double prev = 0.0;
    for (int k = 2; k <= 10; k += 2) {
        double v = x2_integral(std::pow(10.0, -k), 1.0);
        if (!std::isfinite(v) || (k > 2 && v > 1e6))
            throw std::invalid_argument("SmallJumpSpec: integral of x^2 diverges");
        prev = v;
    }
    double v8 = x2_integral(1e-8, 1.0), v10 = x2_integral(1e-10, 1.0);
    if (!(std::fabs(v10 - v8) <= 1e-3 * std::max(1.0, std::fabs(v8))) || prev > 1e6)
        throw std::invalid_argument("SmallJumpSpec: integral of x^2 diverges");
}

double SmallJumpSpec::mass_above(double theta) const {
    if (theta >= 1.0) return 0.0;
    if (alpha == 1.0) return kappa * std::log(1.0 / theta);
    return kappa * (1.0 - std::pow(theta, 1.0 - alpha)) / (1.0 - alpha);
}

double SmallJumpSpec::mean_above(double theta) const {
    if (theta >= 1.0) return 0.0;
    if (alpha == 2.0) return kappa * std::log(1.0 / theta);
    return kappa * (1.0 - std::pow(theta, 2.0 - alpha)) / (2.0 - alpha);
}

double SmallJumpSpec::x2_integral(double lo, double hi) const {
    if (alpha == 3.0) return kappa * std::log(hi / lo);
    return kappa * (std::pow(hi, 3.0 - alpha) - std::pow(lo, 3.0 - alpha)) / (3.0 - alpha);
}

double SmallJumpSpec::sample_size(double theta, Rng& rng) const {
    // Inverse CDF of the normalized density x^(-alpha) on (theta, 1).
    double u = rng.uniform_pos();
    if (alpha == 1.0) return std::pow(theta, 1.0 - u); // exp(log theta * (1-u))
    double a1 = 1.0 - alpha;
    double lo = std::pow(theta, a1);
    return std::pow(lo + u * (1.0 - lo), 1.0 / a1);
}

MomentCache moments(const TailParams& tail_params) {
    MomentCache m;
    m.nu1 = tail(tail_params, 1.0);
    // integral_1^inf tail(x) dx = c * integral_0^inf exp((1+beta)u - lambda u^gamma) du
    auto f = [&](double u) {
        return std::exp((1.0 + tail_params.beta) * u -
                        tail_params.lambda * std::pow(u, tail_params.gamma));
    };
    double hi = 1.0;
    while (f(hi) > 1e-22) {
        hi *= 2.0;
        if (hi > 1e6) throw std::runtime_error("moments: quadrature domain blew up");
    }
    double integral = integrate(f, 0.0, hi, 1e-10);
    m.mu1 = 1.0 + integral; // the prefactor c cancels against nu1
    if (!std::isfinite(m.mu1)) throw std::runtime_error("moments: divergent quadrature");
    return m;
}

double big_jump_second_moment(const TailParams& tail_params) {
    auto f = [&](double u) {
        return std::exp((2.0 + tail_params.beta) * u -
                        tail_params.lambda * std::pow(u, tail_params.gamma));
    };
    double hi = 1.0;
    while (f(hi) > 1e-22) hi *= 2.0;
    return 1.0 + 2.0 * integrate(f, 0.0, hi, 1e-10);
}

BigJumpDraw sample_gamma_uniform(int k, Rng& rng) {
    if (k < 1) throw std::invalid_argument("sample_gamma_uniform: k must be >= 1");
    BigJumpDraw d;
    d.gammas.reserve(k);
    d.uniforms.reserve(k);
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
        acc += rng.exponential();
        d.gammas.push_back(acc);
        d.uniforms.push_back(rng.uniform());
    }
    d.n_tilde = 0;
    return d;
}

namespace {

void extend_draw(BigJumpDraw& d, double threshold, int k_min, Rng& rng) {
    double acc = d.gammas.empty() ? 0.0 : d.gammas.back();
    while ((acc <= threshold) ||
           (static_cast<int>(d.gammas.size()) < k_min)) {
        acc += rng.exponential();
        d.gammas.push_back(acc);
        d.uniforms.push_back(rng.uniform());
    }
    d.n_tilde = 0;
    for (double g : d.gammas)
        if (g <= threshold) ++d.n_tilde;
}

} // namespace

BigJumpDraw make_big_jump_draw(const TailParams& tail_params, std::int64_t n,
                               int k_min, Rng& rng) {
    BigJumpDraw d;
    double threshold = q_n(tail_params, n, 1.0); // n * nu1
    extend_draw(d, threshold, k_min, rng);
    return d;
}

BigJumpDraw make_conditioned_big_jump_draw(const TailParams& tail_params,
                                           std::int64_t n, int j, double g,
                                           bool below, int k_min, Rng& rng) {
    if (j < 1) throw std::invalid_argument("conditioned draw: j must be >= 1");
    BigJumpDraw d;
    // Gamma_j from the Erlang-j law restricted to [0, g] or (g, inf).
    double pg = gamma_p(j, g);
    double u = rng.uniform_pos();
    double target = below ? u * pg : pg + u * (1.0 - pg);
    target = std::min(target, 1.0 - 1e-16);
    double gamma_j = gamma_p_inverse(j, target);
    if (below)
        gamma_j = std::min(gamma_j, g);
    else
        gamma_j = std::max(gamma_j, std::nextafter(g, 1e300));
    d.stratum_log_prob = below ? log_gamma_p(j, g) : log1mexp(log_gamma_p(j, g));
    // Given Gamma_j, the first j-1 epochs are Gamma_j times uniform order stats.
    std::vector<double> inner(static_cast<size_t>(j - 1));
    for (auto& v : inner) v = rng.uniform();
    std::sort(inner.begin(), inner.end());
    for (double v : inner) {
        d.gammas.push_back(v * gamma_j);
        d.uniforms.push_back(rng.uniform());
    }
    d.gammas.push_back(gamma_j);
    d.uniforms.push_back(rng.uniform());
    double threshold = q_n(tail_params, n, 1.0);
    extend_draw(d, threshold, k_min, rng);
    return d;
}

StepPath sample_j_hat_k(const TailParams& tail_params, std::int64_t n, int k,
                        const BigJumpDraw& draw) {
    if (static_cast<int>(draw.gammas.size()) < k)
        throw std::invalid_argument("sample_j_hat_k: draw shorter than k");
    std::vector<Jump> jumps;
    jumps.reserve(k);
    double nd = static_cast<double>(n);
    for (int i = 0; i < k; ++i) {
        double raw = q_n_inverse(tail_params, n, draw.gammas[i]);
        jumps.push_back({draw.uniforms[i], raw / nd});
    }
    return StepPath(0.0, std::move(jumps));
}

StepPath sample_j_check_k(const TailParams& tail_params, std::int64_t n, int k,
                          const BigJumpDraw& draw) {
    if (static_cast<int>(draw.gammas.size()) < k)
        throw std::invalid_argument("sample_j_check_k: draw shorter than k");
    double threshold = q_n(tail_params, n, 1.0);
    std::vector<Jump> jumps;
    double nd = static_cast<double>(n);
    for (int i = 0; i < k; ++i) {
        if (draw.gammas[i] > threshold) {
            // clamped raw size is exactly 1
            jumps.push_back({draw.uniforms[i], -1.0 / nd});
        }
    }
    return StepPath(0.0, std::move(jumps));
}

GridPath sample_h_bar_k(const TailParams& tail_params, const MomentCache& mom,
                        std::int64_t n, int k, int resolution,
                        const BigJumpDraw& draw) {
    if (k < 0) throw std::invalid_argument("sample_h_bar_k: k must be >= 0");
    const int m = resolution;
    std::vector<double> sum_raw(m + 1, 0.0), count(m + 1, 0.0);
    double nd = static_cast<double>(n);
    for (int i = 0; i < draw.n_tilde; ++i) {
        // grid cell index: smallest j with j/m >= U
        int cell = static_cast<int>(std::ceil(draw.uniforms[i] * m));
        cell = std::min(std::max(cell, 0), m);
        if (i >= k) {
            double raw = q_n_inverse(tail_params, n, draw.gammas[i]);
            sum_raw[cell] += raw;
        }
        count[cell] += 1.0;
    }
    std::vector<double> values(m + 1);
    double acc_raw = 0.0, acc_count = 0.0;
    for (int j = 0; j <= m; ++j) {
        acc_raw += sum_raw[j];
        acc_count += count[j];
        values[j] = (acc_raw - mom.mu1 * acc_count) / nd;
    }
    return GridPath(m, std::move(values));
}

GridPath sample_r_bar(const LevyConfig& cfg, const MomentCache& mom,
                      std::int64_t n, int resolution, const BigJumpDraw& draw,
                      Rng& rng) {
    if (resolution < 16)
        throw std::invalid_argument("sample_r_bar: resolution must be >= 16");
    const int m = resolution;
    const double nd = static_cast<double>(n);
    std::vector<double> values(m + 1, 0.0);

    // Brownian part a B(nt)/n.
    if (cfg.a != 0.0) {
        double sigma_cell = cfg.a / std::sqrt(nd * m);
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) {
            acc += sigma_cell * rng.normal();
            values[j] += acc;
        }
    }

    // Compensated small jumps. Infinite-activity specs are truncated at the
    // threshold where the neglected x^2 mass is below 1e-6; the neglected
    // part is a mean-zero martingale of matching variance.
    if (cfg.small_jump) {
        const SmallJumpSpec& s = *cfg.small_jump;
        double theta = 0.0;
        if (!s.finite_activity()) {
            theta = std::pow(1e-6 * (3.0 - s.alpha) / s.kappa, 1.0 / (3.0 - s.alpha));
            theta = std::min(theta, 0.5);
        }
        double rate = s.mass_above(theta);
        double comp = s.mean_above(theta);
        std::int64_t cnt = rng.poisson(nd * rate);
        std::vector<double> cell_sum(m + 1, 0.0);
        for (std::int64_t i = 0; i < cnt; ++i) {
            double t = rng.uniform();
            int cell = static_cast<int>(std::ceil(t * m));
            cell = std::min(std::max(cell, 1), m);
            cell_sum[cell] += s.sample_size(theta, rng);
        }
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) {
            acc += cell_sum[j];
            values[j] += acc / nd - (static_cast<double>(j) / m) * comp;
        }
    }

    // mu1 * N(nt)/n - t nu1 mu1 from the coupled draw.
    std::vector<double> count(m + 1, 0.0);
    for (int i = 0; i < draw.n_tilde; ++i) {
        int cell = static_cast<int>(std::ceil(draw.uniforms[i] * m));
        cell = std::min(std::max(cell, 0), m);
        count[cell] += 1.0;
    }
    double acc_count = 0.0;
    for (int j = 0; j <= m; ++j) {
        acc_count += count[j];
        values[j] += mom.mu1 * acc_count / nd -
                     (static_cast<double>(j) / m) * mom.nu1 * mom.mu1;
    }
    return GridPath(m, std::move(values));
}

namespace {

void add_step_on_grid(std::vector<double>& values, int m, const StepPath& p) {
    for (int j = 0; j <= m; ++j)
        values[j] += p.value(static_cast<double>(j) / m);
}

} // namespace

XBarSample sample_x_bar_with_draw(const LevyConfig& cfg, const MomentCache& mom,
                                  std::int64_t n, int k, int resolution,
                                  BigJumpDraw draw, Rng& rng) {
    XBarSample s;
    s.draw = std::move(draw);
    s.j_hat = sample_j_hat_k(cfg.tail, n, k, s.draw);
    s.j_check = sample_j_check_k(cfg.tail, n, k, s.draw);
    s.h_bar = sample_h_bar_k(cfg.tail, mom, n, k, resolution, s.draw);
    s.r_bar = sample_r_bar(cfg, mom, n, resolution, s.draw, rng);
    std::vector<double> total = s.h_bar.values;
    for (int j = 0; j <= resolution; ++j) total[j] += s.r_bar.values[j];
    add_step_on_grid(total, resolution, s.j_hat);
    add_step_on_grid(total, resolution, s.j_check);
    s.total = GridPath(resolution, std::move(total));
    double nd = static_cast<double>(n);
    for (int i = 0; i < s.draw.n_tilde; ++i)
        s.max_cp_jump =
            std::max(s.max_cp_jump, q_n_inverse(cfg.tail, n, s.draw.gammas[i]) / nd);
    return s;
}

XBarSample sample_x_bar(const LevyConfig& cfg, const MomentCache& mom,
                        std::int64_t n, int k, int resolution, Rng& rng) {
    BigJumpDraw draw = make_big_jump_draw(cfg.tail, n, k, rng);
    return sample_x_bar_with_draw(cfg, mom, n, k, resolution, std::move(draw), rng);
}

StepPath sample_w_bar(const TailParams& tail_params, const MomentCache& mom,
                      std::int64_t n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("sample_w_bar: n must be >= 2");
    std::vector<Jump> jumps;
    double nd = static_cast<double>(n);
    for (std::int64_t i = 1; i <= n; ++i) {
        double z = sample_tail_variable(tail_params, rng);
        jumps.push_back({static_cast<double>(i) / nd, (z - mom.mu1) / nd});
    }
    return StepPath(0.0, std::move(jumps));
}

StepPath sample_s_bar(const TailParams& tail_params, const MomentCache& mom,
                      std::int64_t n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("sample_s_bar: n must be >= 2");
    std::vector<Jump> jumps;
    double nd = static_cast<double>(n);
    for (std::int64_t i = 1; i < n; ++i) {
        double z = sample_tail_variable(tail_params, rng);
        jumps.push_back({rng.uniform_pos(), (z - mom.mu1) / nd});
    }
    double zn = sample_tail_variable(tail_params, rng);
    jumps.push_back({1.0, (zn - mom.mu1) / nd});
    return StepPath(0.0, std::move(jumps));
}

CoupledWalkPair sample_w_s_coupled(const TailParams& tail_params,
                                   const MomentCache& mom, std::int64_t n,
                                   Rng& rng) {
    if (n < 2) throw std::invalid_argument("sample_w_s_coupled: n must be >= 2");
    double nd = static_cast<double>(n);
    std::vector<double> z(static_cast<size_t>(n));
    for (auto& v : z) v = sample_tail_variable(tail_params, rng);
    std::vector<double> u(static_cast<size_t>(n - 1));
    for (auto& v : u) v = rng.uniform_pos();

    // ranks of u among themselves
    std::vector<int> order(u.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return u[a] < u[b]; });
    std::vector<int> rank(u.size());
    for (size_t pos = 0; pos < order.size(); ++pos)
        rank[order[pos]] = static_cast<int>(pos) + 1;

    std::vector<Jump> sj, wj;
    for (size_t i = 0; i < u.size(); ++i) {
        double size = (z[i] - mom.mu1) / nd;
        sj.push_back({u[i], size});
        wj.push_back({static_cast<double>(rank[i]) / nd, size});
    }
    double terminal = (z.back() - mom.mu1) / nd;
    sj.push_back({1.0, terminal});
    wj.push_back({1.0, terminal});

    double disp = 0.0;
    for (size_t pos = 0; pos < order.size(); ++pos)
        disp = std::max(disp,
                        std::fabs(u[order[pos]] - static_cast<double>(pos + 1) / nd));

    CoupledWalkPair out{StepPath(0.0, std::move(wj)), StepPath(0.0, std::move(sj)),
                        disp};
    return out;
}

JumpVector sample_k_jump_sizes(const TailParams& tail_params, std::int64_t n,
                               int k, Rng& rng) {
    BigJumpDraw d = sample_gamma_uniform(k, rng);
    JumpVector v;
    double nd = static_cast<double>(n);
    for (int i = 0; i < k; ++i) {
        v.sizes.push_back(q_n_inverse(tail_params, n, d.gammas[i]) / nd);
        v.times.push_back(d.uniforms[i]);
    }
    return v;
}

JumpVector sample_k_jump_sizes_rw(const TailParams& tail_params, std::int64_t n,
                                  int k, Rng& rng) {
    if (k > n - 1)
        throw std::invalid_argument("sample_k_jump_sizes_rw: k must be <= n-1");
    JumpVector v;
    double nd = static_cast<double>(n);
    double nu1 = tail(tail_params, 1.0);
    // Ascending uniform order statistics V_(1) < V_(2) < ... via the
    // sequential beta recursion; the jump sizes come out nonincreasing.
    double prev = 0.0;
    std::int64_t remaining = n - 1;
    for (int i = 0; i < k; ++i) {
        double u = rng.uniform_pos();
        double frac = 1.0 - std::pow(u, 1.0 / static_cast<double>(remaining));
        prev = prev + (1.0 - prev) * frac;
        --remaining;
        double vv = std::min(std::max(prev, 1e-300), 1.0);
        v.sizes.push_back(q_n_inverse(tail_params, 1, vv * nu1) / nd);
        v.times.push_back(rng.uniform());
    }
    return v;
}

double sample_x_endpoint(const LevyConfig& cfg, const MomentCache& mom, double t,
                         Rng& rng) {
    double x = 0.0;
    std::int64_t jumps = rng.poisson(t * mom.nu1);
    for (std::int64_t i = 0; i < jumps; ++i)
        x += sample_tail_variable(cfg.tail, rng);
    x -= t * mom.nu1 * mom.mu1;
    if (cfg.a != 0.0) x += cfg.a * std::sqrt(t) * rng.normal();
    if (cfg.small_jump) {
        const SmallJumpSpec& s = *cfg.small_jump;
        double theta = 0.0;
        if (!s.finite_activity()) {
            theta = std::pow(1e-6 * (3.0 - s.alpha) / s.kappa, 1.0 / (3.0 - s.alpha));
            theta = std::min(theta, 0.5);
        }
        std::int64_t cnt = rng.poisson(t * s.mass_above(theta));
        for (std::int64_t i = 0; i < cnt; ++i) x += s.sample_size(theta, rng);
        x -= t * s.mean_above(theta);
    }
    return x;
}

} // namespace heavytail
