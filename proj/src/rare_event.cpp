#include "heavytail/rare_event.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "heavytail/special_functions.hpp"

namespace heavytail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kChunk = 4096;

int g_threads = 0;

int effective_threads() {
    if (g_threads > 0) return g_threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Deterministic chunked trial runner: chunk i is driven by Rng::derive(seed,i)
// regardless of the worker that executes it.
std::int64_t run_trials(std::int64_t trials, std::uint64_t seed,
                        const std::function<std::int64_t(Rng&, std::int64_t)>& chunk_fn) {
    std::int64_t n_chunks = (trials + kChunk - 1) / kChunk;
    int workers = std::min<std::int64_t>(effective_threads(), n_chunks);
    if (workers <= 1) {
        std::int64_t hits = 0;
        for (std::int64_t ci = 0; ci < n_chunks; ++ci) {
            Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(ci));
            std::int64_t count = std::min(kChunk, trials - ci * kChunk);
            hits += chunk_fn(rng, count);
        }
        return hits;
    }
    std::vector<std::int64_t> partial(workers, 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            std::int64_t h = 0;
            for (std::int64_t ci = w; ci < n_chunks; ci += workers) {
                Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(ci));
                std::int64_t count = std::min(kChunk, trials - ci * kChunk);
                h += chunk_fn(rng, count);
            }
            partial[w] = h;
        });
    }
    for (auto& t : pool) t.join();
    std::int64_t hits = 0;
    for (auto h : partial) hits += h;
    return hits;
}

double safe_log_ratio(double p_hat, const TailParams& tail, std::int64_t n) {
    if (p_hat <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(p_hat) / speed(tail, n);
}

bool eval_event(const EventSpec& event, const XBarSample& s,
                const TailParams& tail, std::int64_t n) {
    if (event.path_pred) return event.path_pred(s);
    if (event.vector_pred) {
        JumpVector v;
        double nd = static_cast<double>(n);
        int k = static_cast<int>(s.draw.gammas.size());
        for (int i = 0; i < k; ++i) {
            v.sizes.push_back(q_n_inverse(tail, n, s.draw.gammas[i]) / nd);
            v.times.push_back(s.draw.uniforms[i]);
        }
        return event.vector_pred(v);
    }
    throw std::invalid_argument("EventSpec: no predicate set");
}

} // namespace

void set_thread_count(int threads) { g_threads = threads; }
int thread_count() { return effective_threads(); }

void EventSpec::validate() const {
    if (analytic_inner_rate && analytic_outer_rate) {
        double inner = analytic_inner_rate->as_double();
        double outer = analytic_outer_rate->as_double();
        if (inner < outer)
            throw std::invalid_argument("EventSpec: inner rate must be >= outer rate");
    }
    if (!path_pred && !vector_pred && !rectangle)
        throw std::invalid_argument("EventSpec: needs a predicate or rectangle");
}

EstimateResult estimate_plain(const EventSpec& event, const SamplerSpec& sampler,
                              std::int64_t n, std::int64_t trials,
                              std::uint64_t seed) {
    if (trials < 1000)
        throw std::invalid_argument("estimate_plain: trials must be >= 1000");
    MomentCache mom = moments(sampler.cfg.tail);
    std::int64_t hits = run_trials(
        trials, seed, [&](Rng& rng, std::int64_t count) {
            std::int64_t h = 0;
            for (std::int64_t t = 0; t < count; ++t) {
                XBarSample s = sample_x_bar(sampler.cfg, mom, n, sampler.k,
                                            sampler.resolution, rng);
                if (eval_event(event, s, sampler.cfg.tail, n)) ++h;
            }
            return h;
        });
    EstimateResult r;
    r.n = n;
    r.trials = trials;
    r.hits = static_cast<double>(hits);
    r.p_hat = static_cast<double>(hits) / trials;
    BinomCI ci = binom_ci(hits, trials, 0.99);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.zero_hits = hits == 0;
    r.log_ratio = safe_log_ratio(r.p_hat, sampler.cfg.tail, n);
    r.estimator = "plain";
    return r;
}

EstimateResult estimate_big_jump_conditioned(const EventSpec& event,
                                             const SamplerSpec& sampler,
                                             std::int64_t n, int j,
                                             std::int64_t trials,
                                             std::uint64_t seed) {
    if (j == 0) return estimate_plain(event, sampler, n, trials, seed);
    if (j < 0) throw std::invalid_argument("conditioned estimator: j must be >= 0");
    if (!event.conditioning_threshold)
        throw std::invalid_argument(
            "conditioned estimator: event has no size threshold; use estimate_plain");
    double theta = *event.conditioning_threshold;
    if (!(theta * static_cast<double>(n) >= 1.0))
        throw std::invalid_argument("conditioned estimator: n * theta must be >= 1");

    MomentCache mom = moments(sampler.cfg.tail);
    const TailParams& tail_params = sampler.cfg.tail;
    double g = q_n(tail_params, n, theta * static_cast<double>(n));
    int k = std::max(sampler.k, j);

    std::int64_t t_below = trials / 2, t_above = trials - t_below;
    double log_w_below = log_gamma_p(j, g);
    double log_w_above = log1mexp(log_w_below);

    auto run_stratum = [&](bool below, std::int64_t t_count, std::uint64_t ss) {
        return run_trials(t_count, ss, [&](Rng& rng, std::int64_t count) {
            std::int64_t h = 0;
            for (std::int64_t t = 0; t < count; ++t) {
                BigJumpDraw draw = make_conditioned_big_jump_draw(tail_params, n, j,
                                                                  g, below, k, rng);
                XBarSample s = sample_x_bar_with_draw(sampler.cfg, mom, n, k,
                                                      sampler.resolution,
                                                      std::move(draw), rng);
                if (eval_event(event, s, tail_params, n)) ++h;
            }
            return h;
        });
    };
    std::int64_t h_below = run_stratum(true, t_below, seed * 2 + 1);
    std::int64_t h_above = run_stratum(false, t_above, seed * 2 + 2);

    double w_below = std::exp(log_w_below), w_above = std::exp(log_w_above);
    double p_below = static_cast<double>(h_below) / t_below;
    double p_above = static_cast<double>(h_above) / t_above;

    EstimateResult r;
    r.n = n;
    r.trials = trials;
    r.hits = static_cast<double>(h_below + h_above);
    r.p_hat = w_below * p_below + w_above * p_above;
    BinomCI cb = binom_ci(h_below, t_below, 0.99);
    BinomCI ca = binom_ci(h_above, t_above, 0.99);
    r.ci_low = w_below * cb.low + w_above * ca.low;
    r.ci_high = w_below * cb.high + w_above * ca.high;
    r.zero_hits = r.p_hat == 0.0;
    r.log_ratio = safe_log_ratio(r.p_hat, tail_params, n);
    r.estimator = "conditioned";
    return r;
}

namespace {

struct GammaBox {
    double lo, hi; // hi may be +inf
};

// Volume of {gamma_1 < ... < gamma_j <= g} with gamma_i in box_i (Lebesgue,
// no density; the exponential factor lives on the outermost coordinate).
double ordered_volume(const std::vector<GammaBox>& boxes, int j, double g) {
    if (j == 0) return 1.0;
    double lo = boxes[j - 1].lo;
    double hi = std::min(boxes[j - 1].hi, g);
    if (hi <= lo) return 0.0;
    if (j == 1) return hi - lo;
    return integrate([&](double x) { return ordered_volume(boxes, j - 1, x); }, lo,
                     hi, 1e-9);
}

} // namespace

double exact_jump_vector_prob(const TailParams& tail_params, std::int64_t n,
                              const std::vector<std::pair<double, double>>& rect,
                              int k) {
    if (static_cast<int>(rect.size()) != k)
        throw std::invalid_argument("exact_jump_vector_prob: rectangle size != k");
    double nd = static_cast<double>(n);
    std::vector<GammaBox> boxes(k);
    for (int i = 0; i < k; ++i) {
        double lo = rect[i].first, hi = rect[i].second;
        if (!(lo >= 0.0) || !(hi >= lo))
            throw std::invalid_argument("exact_jump_vector_prob: bad rectangle");
        if (hi * nd < 1.0) return 0.0; // sizes are always >= 1/n
        // ordering emptiness: a later coordinate demanding more than an
        // earlier one can supply
        for (int m = 0; m < i; ++m)
            if (lo > rect[m].second) return 0.0;
        boxes[i].hi = (lo * nd <= 1.0) ? kInf : q_n(tail_params, n, lo * nd);
        boxes[i].lo = std::isinf(hi) ? 0.0 : q_n(tail_params, n, hi * nd);
        if (boxes[i].lo >= boxes[i].hi) return 0.0;
    }
    // Outermost coordinate carries exp(-gamma_k). The inner volume grows at
    // most polynomially, so truncating the upper limit 60 e-foldings past the
    // last finite feature loses a negligible relative mass.
    double a_k = boxes[k - 1].lo;
    double b_k = boxes[k - 1].hi;
    double far = a_k;
    for (int i = 0; i < k; ++i) {
        far = std::max(far, boxes[i].lo);
        if (!std::isinf(boxes[i].hi)) far = std::max(far, boxes[i].hi);
    }
    double upper = std::min(b_k, far + 60.0);
    if (upper <= a_k) return 0.0;
    return integrate(
        [&](double x) { return std::exp(-x) * ordered_volume(boxes, k - 1, x); },
        a_k, upper, 1e-9);
}

double log_prob_jump_threshold(const TailParams& tail_params, std::int64_t n,
                               int i, double x) {
    if (i < 1) throw std::invalid_argument("log_prob_jump_threshold: i must be >= 1");
    double nd = static_cast<double>(n);
    if (!(x * nd >= 1.0))
        throw std::invalid_argument("log_prob_jump_threshold: n*x must be >= 1");
    return log_gamma_p_from_log(i, log_q_n(tail_params, nd, nd * x));
}

namespace {

// Detect a pure threshold rectangle {size_i >= x}: one binding lower bound,
// everything else free.
std::optional<std::pair<int, double>> threshold_form(
    const std::vector<std::pair<double, double>>& rect, std::int64_t n) {
    int idx = -1;
    for (size_t i = 0; i < rect.size(); ++i) {
        if (!std::isinf(rect[i].second)) return std::nullopt;
        bool binding = rect[i].first * static_cast<double>(n) > 1.0;
        if (binding) {
            if (idx >= 0) return std::nullopt;
            idx = static_cast<int>(i);
        }
    }
    if (idx < 0) return std::nullopt;
    return std::make_pair(idx + 1, rect[idx].first);
}

} // namespace

LdpReport ldp_slope_check(const EventSpec& event, const SamplerSpec& sampler,
                          const std::vector<std::int64_t>& n_grid,
                          const SlopeCheckOptions& opt) {
    event.validate();
    for (size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("ldp_slope_check: n grid must be increasing");

    LdpReport rep;
    rep.event_name = event.name;
    const TailParams& tail_params = sampler.cfg.tail;

    bool exact = false;
    std::pair<int, double> thr{0, 0.0};
    if (event.rectangle) {
        // exact route only when the rectangle is still a threshold at the
        // largest n (binding ordering checked per n below)
        auto t = threshold_form(*event.rectangle, n_grid.front());
        if (t) {
            exact = true;
            thr = *t;
        }
    }

    std::vector<double> log_probs;
    for (std::int64_t n : n_grid) {
        EstimateResult er;
        if (exact) {
            er.n = n;
            er.estimator = "exact";
            double lp = log_prob_jump_threshold(tail_params, n, thr.first, thr.second);
            er.p_hat = std::exp(lp);
            er.ci_low = er.ci_high = er.p_hat;
            er.log_ratio = lp / speed(tail_params, n);
            log_probs.push_back(lp);
        } else if (opt.conditioning_jumps > 0) {
            er = estimate_big_jump_conditioned(event, sampler, n,
                                               opt.conditioning_jumps, opt.trials,
                                               opt.seed);
            log_probs.push_back(er.p_hat > 0 ? std::log(er.p_hat) : kNegInf);
        } else {
            er = estimate_plain(event, sampler, n, opt.trials, opt.seed);
            log_probs.push_back(er.p_hat > 0 ? std::log(er.p_hat) : kNegInf);
        }
        rep.results.push_back(er);
    }

    rep.terminal_log_ratio = rep.results.back().log_ratio;
    rep.monotone_log_prob = true;
    for (size_t i = 1; i < log_probs.size(); ++i)
        if (!(log_probs[i] < log_probs[i - 1])) rep.monotone_log_prob = false;

    bool any_zero = false;
    for (const auto& r : rep.results) any_zero = any_zero || r.zero_hits;

    if (!event.analytic_inner_rate || !event.analytic_outer_rate) {
        rep.verdict = "inconclusive";
        return rep;
    }
    rep.band_low = -event.analytic_inner_rate->as_double() - opt.band_tolerance;
    rep.band_high = -event.analytic_outer_rate->as_double() + opt.band_tolerance;
    if (any_zero || std::isnan(rep.terminal_log_ratio)) {
        rep.verdict = "inconclusive";
    } else if (rep.terminal_log_ratio >= rep.band_low &&
               rep.terminal_log_ratio <= rep.band_high) {
        rep.verdict = "consistent";
    } else {
        rep.verdict = "inconsistent";
    }
    return rep;
}

OneBigJumpReport one_big_jump_check(const LevyConfig& cfg, double x,
                                    const std::vector<std::int64_t>& n_grid,
                                    std::int64_t trials, std::uint64_t seed) {
    MomentCache mom = moments(cfg.tail);
    auto estimate_endpoint = [&](double t, std::uint64_t ss) {
        std::int64_t hits = run_trials(trials, ss, [&](Rng& rng, std::int64_t count) {
            std::int64_t h = 0;
            for (std::int64_t i = 0; i < count; ++i)
                if (sample_x_endpoint(cfg, mom, t, rng) > x) ++h;
            return h;
        });
        return hits;
    };
    OneBigJumpReport rep;
    rep.x = x;
    std::int64_t h1 = estimate_endpoint(1.0, seed * 131 + 7);
    rep.p1_hat = static_cast<double>(h1) / trials;
    BinomCI ci1 = binom_ci(h1, trials, 0.99);
    for (std::int64_t n : n_grid) {
        std::int64_t hn = estimate_endpoint(static_cast<double>(n), seed * 131 + 7 + n);
        double pn = static_cast<double>(hn) / trials;
        BinomCI cin = binom_ci(hn, trials, 0.99);
        OneBigJumpPoint pt;
        pt.n = n;
        double nd = static_cast<double>(n);
        pt.ratio = (rep.p1_hat > 0) ? pn / (nd * rep.p1_hat) : kInf;
        pt.ci_low = (ci1.high > 0) ? cin.low / (nd * ci1.high) : 0.0;
        pt.ci_high = (ci1.low > 0) ? cin.high / (nd * ci1.low) : kInf;
        pt.in_regime = rep.p1_hat > 0 && rep.p1_hat <= 0.02;
        rep.points.push_back(pt);
    }
    return rep;
}

double compound_poisson_tail(const TailParams& tail_params, double t, double x,
                             double h) {
    if (!(h > 0.0)) throw std::invalid_argument("compound_poisson_tail: h must be > 0");
    double nu1 = tail(tail_params, 1.0);
    double mu1 = moments(tail_params).mu1;
    double lam = t * nu1;
    double drift = t * nu1 * mu1;
    double cutoff = x + drift; // P(X_c(t) > x) = P(S > cutoff)
    if (cutoff < 0.0) return 1.0;

    // Z lattice masses.
    int kmax = static_cast<int>(std::ceil(cutoff / h)) + 2;
    std::vector<double> q(kmax + 1, 0.0);
    double tail_prev = 1.0; // P(Z >= 1) normalized
    for (int k = 1; k <= kmax; ++k) {
        double upper_edge = (k + 0.5) * h;
        double tail_up = (upper_edge <= 1.0) ? 1.0 : tail(tail_params, upper_edge) / nu1;
        q[k] = std::max(0.0, tail_prev - tail_up);
        tail_prev = tail_up;
    }
    // the remaining mass sits above the lattice and only helps exceed cutoff
    double q_above = tail_prev;

    int smax = kmax;
    std::vector<double> f(smax + 1, 0.0);
    f[0] = std::exp(-lam);
    // Panjer recursion for the Poisson compound law.
    for (int s = 1; s <= smax; ++s) {
        double acc = 0.0;
        for (int k = 1; k <= s; ++k) {
            if (q[k] == 0.0) continue;
            acc += k * q[k] * f[s - k];
        }
        f[s] = lam / s * acc;
    }
    // cumulative below cutoff, counting only fully-below lattice points
    double below = 0.0;
    int s_cut = static_cast<int>(std::floor(cutoff / h));
    for (int s = 0; s <= std::min(s_cut, smax); ++s) below += f[s];
    (void)q_above; // mass above the lattice can only push the sum over cutoff
    return std::max(0.0, 1.0 - below);
}

namespace {

// --- tilted importance sampling for the truncated-sum bounds ---

struct TiltTable {
    double s = 0.0;
    double atom_mass = 0.0;     // unnormalized: P(Z > cap)
    double total = 0.0;         // normalizing constant of the tilted table
    double du = 0.0;
    std::vector<double> cum;    // cumulative cell masses (tilted, unnormalized)
    std::vector<double> u_grid; // cell edges
    double log_atom_true = 0.0; // log P(Z > cap)
};

double tail_density_u(const TailParams& p, double u) {
    // density of log Z at u (normalized law on [1, inf))
    double rp = p.lambda * p.gamma * std::pow(u, p.gamma - 1.0) - p.beta;
    if (u == 0.0) rp = std::max(rp, 0.0);
    return rp * std::exp(p.beta * u - p.lambda * std::pow(u, p.gamma));
}

double tilted_mgf(const TailParams& p, double s, double cap) {
    double lc = std::log(cap);
    double atom = std::exp(p.beta * lc - p.lambda * std::pow(lc, p.gamma));
    double integral = integrate(
        [&](double u) { return std::exp(s * std::exp(u)) * tail_density_u(p, u); },
        0.0, lc, 1e-10);
    return atom + integral;
}

double tilted_mean(const TailParams& p, double s, double cap) {
    double lc = std::log(cap);
    double num = integrate(
        [&](double u) {
            return std::exp(u + s * std::exp(u)) * tail_density_u(p, u);
        },
        0.0, lc, 1e-10);
    return num / tilted_mgf(p, s, cap);
}

double solve_tilt(const TailParams& p, double cap, double target_mean) {
    double lo = -64.0 / cap, hi = 0.0;
    if (tilted_mean(p, 0.0, cap) < target_mean) {
        lo = 0.0;
        hi = 1.0 / cap;
        while (tilted_mean(p, hi, cap) < target_mean) {
            hi *= 1.5;
            if (hi * cap > 5000.0)
                throw std::runtime_error("solve_tilt: target mean unreachable");
        }
    } else {
        while (tilted_mean(p, lo, cap) > target_mean) {
            lo *= 2.0;
            if (lo < -1e6)
                throw std::runtime_error("solve_tilt: target mean unreachable");
        }
    }
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (tilted_mean(p, mid, cap) < target_mean)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

TiltTable build_tilt_table(const TailParams& p, double s, double cap, int cells) {
    TiltTable t;
    t.s = s;
    double lc = std::log(cap);
    t.du = lc / cells;
    t.u_grid.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) t.u_grid[i] = lc * i / cells;
    t.cum.resize(cells);
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
        double a = t.u_grid[i], b = t.u_grid[i + 1], m = 0.5 * (a + b);
        auto g = [&](double u) {
            return std::exp(s * std::exp(u)) * tail_density_u(p, u);
        };
        double mass = (b - a) / 6.0 * (g(a) + 4.0 * g(m) + g(b));
        acc += mass;
        t.cum[i] = acc;
    }
    t.atom_mass = std::exp(p.beta * lc - p.lambda * std::pow(lc, p.gamma));
    t.log_atom_true = p.beta * lc - p.lambda * std::pow(lc, p.gamma);
    t.total = acc + t.atom_mass;
    return t;
}

// Draw Y from the tabulated tilted law; returns (y, log f_true(y) - log q(y)).
std::pair<double, double> draw_tilted(const TailParams& p, const TiltTable& t,
                                      Rng& rng) {
    double u = rng.uniform_pos() * t.total;
    if (u > t.cum.back()) {
        // atom: Y = 0 (Z above the cap, truncated away)
        double log_q = std::log(t.atom_mass / t.total);
        return {0.0, t.log_atom_true - log_q};
    }
    size_t cell = std::lower_bound(t.cum.begin(), t.cum.end(), u) - t.cum.begin();
    double lo = t.u_grid[cell], hi = t.u_grid[cell + 1];
    double uu = lo + (hi - lo) * rng.uniform();
    double cell_mass = t.cum[cell] - (cell == 0 ? 0.0 : t.cum[cell - 1]);
    double log_q = std::log(cell_mass / t.total) - std::log(hi - lo);
    double log_f = std::log(tail_density_u(p, uu));
    // work in u-space for both densities; the Jacobian cancels
    return {std::exp(uu), log_f - log_q};
}

double is_log_estimate(const TailParams& p, double cap, double target_sum,
                       bool upper, std::int64_t j, std::int64_t trials,
                       std::uint64_t seed) {
    double target_mean = target_sum / static_cast<double>(j);
    double s = solve_tilt(p, cap, target_mean);
    TiltTable table = build_tilt_table(p, s, cap, 4096);

    // single-threaded: these runs are cheap relative to the path estimators
    // and need the full weight vector
    std::vector<double> all_hits;
    Rng rng = Rng::derive(seed, 0xabcdef);
    all_hits.reserve(1024);
    for (std::int64_t t = 0; t < trials; ++t) {
        double sum = 0.0, lw = 0.0;
        for (std::int64_t i = 0; i < j; ++i) {
            auto [y, dlw] = draw_tilted(p, table, rng);
            sum += y;
            lw += dlw;
        }
        bool hit = upper ? (sum > target_sum) : (sum < target_sum);
        if (hit) all_hits.push_back(lw);
    }
    if (all_hits.empty()) return kNegInf;
    return logsumexp(all_hits) - std::log(static_cast<double>(trials));
}

} // namespace

TruncatedSumReport truncated_sum_tail_check(const TailParams& tail_params,
                                            double delta, double eps, int m_factor,
                                            const std::vector<std::int64_t>& n_grid,
                                            std::int64_t trials,
                                            std::uint64_t seed) {
    if (!(delta > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("truncated_sum_tail_check: delta, eps must be > 0");
    MomentCache mom = moments(tail_params);
    TruncatedSumReport rep;
    rep.delta = delta;
    rep.eps = eps;
    rep.m_factor = m_factor;
    rep.bound = -eps / (2.0 * delta);
    for (std::int64_t n : n_grid) {
        double cap = static_cast<double>(n) * delta;
        if (cap <= 1.0)
            throw std::invalid_argument("truncated_sum_tail_check: n*delta must exceed 1");
        double sp = speed(tail_params, n);
        TruncatedSumPoint pt;
        pt.n = n;
        double best = kNegInf;
        for (std::int64_t j : {n, static_cast<std::int64_t>(m_factor) * n}) {
            double target = static_cast<double>(n) * eps + j * mom.mu1;
            best = std::max(best, is_log_estimate(tail_params, cap, target, true, j,
                                                  trials, seed + 17 * j));
        }
        pt.log_ratio = best / sp;
        double best_rev = kNegInf;
        for (std::int64_t j : {static_cast<std::int64_t>(m_factor) * n}) {
            double target = j * mom.mu1 - static_cast<double>(n) * eps;
            if (target <= j * 1.0) {
                // the sum of j variables that are >= 1 (unless truncated) can
                // still go below j only via atoms; the probability is
                // effectively zero at our scales
                best_rev = std::max(best_rev, kNegInf);
                continue;
            }
            best_rev = std::max(best_rev, is_log_estimate(tail_params, cap, target,
                                                          false, j, trials,
                                                          seed + 31 * j));
        }
        pt.log_ratio_reversed = best_rev / sp;
        rep.points.push_back(pt);
    }
    return rep;
}

bool etemadi_oracle(const std::vector<std::vector<double>>& partial_sums, double x) {
    if (partial_sums.empty() || partial_sums.front().empty())
        throw std::invalid_argument("etemadi_oracle: empty samples");
    if (!(x >= 0.0)) throw std::invalid_argument("etemadi_oracle: x must be >= 0");
    size_t trials = partial_sums.size();
    size_t n = partial_sums.front().size();
    std::int64_t lhs_hits = 0;
    std::vector<std::int64_t> step_hits(n, 0);
    for (const auto& row : partial_sums) {
        if (row.size() != n)
            throw std::invalid_argument("etemadi_oracle: ragged samples");
        double best = 0.0;
        for (size_t k = 0; k < n; ++k) {
            best = std::max(best, std::fabs(row[k]));
            if (std::fabs(row[k]) >= x) ++step_hits[k];
        }
        if (best >= 3.0 * x) ++lhs_hits;
    }
    double lhs = static_cast<double>(lhs_hits) / trials;
    double rhs = 0.0;
    for (size_t k = 0; k < n; ++k)
        rhs = std::max(rhs, static_cast<double>(step_hits[k]) / trials);
    auto se = [&](double p) { return std::sqrt(p * (1 - p) / trials); };
    double slack = 2.576 * (se(lhs) + 3.0 * se(rhs)) + 1e-12;
    return lhs <= 3.0 * rhs + slack;
}

bool bernstein_oracle(const std::vector<std::vector<double>>& samples, double b,
                      double t) {
    if (samples.empty() || samples.front().empty())
        throw std::invalid_argument("bernstein_oracle: empty samples");
    if (!(t >= 0.0)) throw std::invalid_argument("bernstein_oracle: t must be >= 0");
    size_t trials = samples.size();
    size_t n = samples.front().size();
    std::vector<double> col_mean(n, 0.0), col_sq(n, 0.0);
    for (const auto& row : samples) {
        if (row.size() != n)
            throw std::invalid_argument("bernstein_oracle: ragged samples");
        for (size_t i = 0; i < n; ++i) {
            if (row[i] > b)
                throw std::invalid_argument("bernstein_oracle: sample exceeds bound b");
            col_mean[i] += row[i];
            col_sq[i] += row[i] * row[i];
        }
    }
    double v = 0.0;
    for (size_t i = 0; i < n; ++i) {
        col_mean[i] /= trials;
        v += col_sq[i] / trials;
    }
    std::int64_t hits = 0;
    for (const auto& row : samples) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += row[i] - col_mean[i];
        if (s >= t) ++hits;
    }
    double freq = static_cast<double>(hits) / trials;
    double bound = (t == 0.0) ? 1.0 : std::exp(-t * t / (2.0 * (v + b * t / 3.0)));
    double slack = 2.576 * std::sqrt(freq * (1 - freq) / trials) + 1e-12;
    return freq <= bound + slack;
}

ProductLdpReport product_ldp_check(const std::vector<ProductCoordinate>& coords,
                                   double gamma,
                                   const std::vector<std::int64_t>& n_grid) {
    ProductLdpReport rep;
    rep.target = 0.0;
    for (const auto& c : coords) rep.target -= c.lambda * c.jump_index;
    for (std::int64_t n : n_grid) {
        double lp = 0.0;
        for (const auto& c : coords) {
            if (c.jump_index == 0) continue; // event always true
            lp += log_prob_jump_threshold(c.tail, n, c.jump_index, c.x);
        }
        double sp = std::pow(std::log(static_cast<double>(n)), gamma);
        rep.points.push_back({n, lp / sp});
    }
    return rep;
}

} // namespace heavytail
