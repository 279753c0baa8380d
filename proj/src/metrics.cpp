#include "heavytail/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heavytail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double uniform_distance(const StepPath& p, const StepPath& q) {
    // The difference is constant between breakpoints, so the sup is attained
    // on the union of jump times plus t = 0.
    double d = std::fabs(p.initial() - q.initial());
    size_t i = 0, j = 0;
    double pv = p.initial(), qv = q.initial();
    const auto& pj = p.jumps();
    const auto& qj = q.jumps();
    while (i < pj.size() || j < qj.size()) {
        double tp = i < pj.size() ? pj[i].time : 2.0;
        double tq = j < qj.size() ? qj[j].time : 2.0;
        if (tp <= tq) {
            pv += pj[i++].size;
        }
        if (tq <= tp && j < qj.size()) {
            qv += qj[j++].size;
        }
        d = std::max(d, std::fabs(pv - qv));
    }
    return d;
}

namespace {

// Feasibility of matching p onto q at level eps; see header. tau(i,j) is the
// earliest admissible time of the last consumed event after i jumps of p and
// j jumps of q.
bool j1_feasible(const StepPath& p, const StepPath& q, double eps) {
    const auto& pj = p.jumps();
    const auto& qj = q.jumps();
    const int a = static_cast<int>(pj.size());
    const int b = static_cast<int>(qj.size());

    auto pval = [&](int i) { return p.value_after(i); };
    auto qval = [&](int j) { return q.value_after(j); };
    auto ok = [&](int i, int j) { return std::fabs(pval(i) - qval(j)) <= eps; };

    if (!ok(0, 0)) return false;

    std::vector<double> prev(b + 1, kInf), cur(b + 1, kInf);
    prev[0] = 0.0;
    for (int j = 1; j <= b; ++j) {
        if (prev[j - 1] == kInf || !ok(0, j)) break;
        if (qj[j - 1].time >= prev[j - 1]) prev[j] = qj[j - 1].time;
    }
    for (int i = 1; i <= a; ++i) {
        std::fill(cur.begin(), cur.end(), kInf);
        const double u = pj[i - 1].time;
        for (int j = 0; j <= b; ++j) {
            // advance p alone from (i-1, j)
            if (prev[j] != kInf && ok(i, j)) {
                double s;
                if (u == 1.0) {
                    s = 1.0;
                } else {
                    s = std::max({prev[j], u - eps, 0.0});
                }
                if (s <= std::min(u + eps, 1.0)) cur[j] = std::min(cur[j], s);
            }
            if (j >= 1) {
                const double v = qj[j - 1].time;
                // advance q alone from (i, j-1)
                if (cur[j - 1] != kInf && ok(i, j) && v >= cur[j - 1])
                    cur[j] = std::min(cur[j], v);
                // advance both simultaneously from (i-1, j-1)
                if (prev[j - 1] != kInf && ok(i, j) &&
                    std::fabs(u - v) <= eps && (u == 1.0) == (v == 1.0) &&
                    v >= prev[j - 1])
                    cur[j] = std::min(cur[j], v);
            }
        }
        std::swap(prev, cur);
    }
    return prev[b] != kInf;
}

} // namespace

double j1_distance(const StepPath& p, const StepPath& q, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("j1_distance: tol must be > 0");
    double hi = uniform_distance(p, q);
    if (hi == 0.0) return 0.0;
    if (j1_feasible(p, q, 0.0)) return 0.0;
    double lo = 0.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (j1_feasible(p, q, mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

inline double linf(const GraphPoint& x, const GraphPoint& y) {
    return std::max(std::fabs(x.value - y.value), std::fabs(x.time - y.time));
}

double bottleneck_alignment(const std::vector<GraphPoint>& A,
                            const std::vector<GraphPoint>& B) {
    const size_t na = A.size(), nb = B.size();
    std::vector<double> prev(nb), cur(nb);
    prev[0] = linf(A[0], B[0]);
    for (size_t j = 1; j < nb; ++j)
        prev[j] = std::max(prev[j - 1], linf(A[0], B[j]));
    for (size_t i = 1; i < na; ++i) {
        cur[0] = std::max(prev[0], linf(A[i], B[0]));
        for (size_t j = 1; j < nb; ++j) {
            double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
            cur[j] = std::max(best, linf(A[i], B[j]));
        }
        std::swap(prev, cur);
    }
    return prev[nb - 1];
}

} // namespace

double m1prime_upper(const StepPath& p, const StepPath& q, double density) {
    if (!(density > 0.0))
        throw std::invalid_argument("m1prime_upper: density must be > 0");
    auto A = completed_graph(p, density);
    auto B = completed_graph(q, density);
    return bottleneck_alignment(A, B);
}

double m1prime_upper(const GridPath& p, const GridPath& q, double density) {
    return m1prime_upper(grid_to_step(p), grid_to_step(q), density);
}

std::vector<GraphSegment> graph_segments(const StepPath& p) {
    std::vector<GraphSegment> segs;
    segs.reserve(2 * p.jumps().size() + 2);
    double cur = 0.0; // xi(0-)
    if (p.initial() != 0.0) {
        segs.push_back({true, 0.0, 0.0, std::min(0.0, p.initial()),
                        std::max(0.0, p.initial())});
    }
    cur = p.initial();
    double t_cur = 0.0;
    for (const Jump& j : p.jumps()) {
        if (j.time > t_cur)
            segs.push_back({false, t_cur, j.time, cur, cur});
        segs.push_back({true, j.time, j.time, std::min(cur, cur + j.size),
                        std::max(cur, cur + j.size)});
        cur += j.size;
        t_cur = j.time;
    }
    if (t_cur < 1.0) segs.push_back({false, t_cur, 1.0, cur, cur});
    return segs;
}

namespace {

inline double clamp_dist(double x, double lo, double hi) {
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
}

inline double seg_dist(const GraphPoint& z, const GraphSegment& s) {
    return std::max(clamp_dist(z.time, s.t0, s.t1), clamp_dist(z.value, s.v0, s.v1));
}

} // namespace

double point_to_graph(const GraphPoint& z, const std::vector<GraphSegment>& segs) {
    // Segments are time ordered; expand outward from the time-nearest segment
    // and stop once the pure time gap exceeds the best value found.
    if (segs.empty()) return kInf;
    size_t lo = 0, hi = segs.size();
    // first segment with t1 >= z.time
    size_t mid = std::lower_bound(segs.begin(), segs.end(), z.time,
                                  [](const GraphSegment& s, double t) {
                                      return s.t1 < t;
                                  }) -
                 segs.begin();
    double best = kInf;
    // scan right
    for (size_t i = mid; i < hi; ++i) {
        if (clamp_dist(z.time, segs[i].t0, segs[i].t1) >= best) break;
        best = std::min(best, seg_dist(z, segs[i]));
    }
    // scan left
    for (size_t i = mid; i-- > lo;) {
        if (clamp_dist(z.time, segs[i].t0, segs[i].t1) >= best) break;
        best = std::min(best, seg_dist(z, segs[i]));
    }
    return best;
}

double m1prime_lower_pointgap(const StepPath& p, const StepPath& q, double density) {
    if (!(density > 0.0))
        throw std::invalid_argument("m1prime_lower_pointgap: density must be > 0");
    auto segs_p = graph_segments(p);
    auto segs_q = graph_segments(q);
    double bound = 0.0;
    for (const GraphPoint& z : completed_graph(p, density))
        bound = std::max(bound, point_to_graph(z, segs_q));
    for (const GraphPoint& z : completed_graph(q, density))
        bound = std::max(bound, point_to_graph(z, segs_p));
    return bound;
}

double m1prime_lower_flatjump(const StepPath& p, const StepPath& q, int pair_cap) {
    // q's displacement windows: pairs (s, t) of (extended) jump times with the
    // gap |q(t) - q(s-)|; p must stay constant on [s - delta, t + delta].
    // A virtual time-0 jump covers q(0) != 0 via the q(0-) = 0 convention.
    std::vector<double> times;
    std::vector<double> pre;  // q(s-) at each jump
    std::vector<double> post; // q(t) at each jump
    if (q.initial() != 0.0) {
        times.push_back(0.0);
        pre.push_back(0.0);
        post.push_back(q.initial());
    }
    for (int i = 0; i < q.jump_count(); ++i) {
        times.push_back(q.jumps()[i].time);
        pre.push_back(q.value_after(i));
        post.push_back(q.value_after(i + 1));
    }
    const int m = static_cast<int>(times.size());
    if (m == 0) return 0.0;

    // p's constancy breakers. A nonzero start counts: the p(0-) = 0 convention
    // puts a vertical at t = 0 into Gamma(p), and the lemma's argument needs
    // that vertical at least delta away from q's displacement window.
    std::vector<double> breakers;
    if (p.initial() != 0.0) breakers.push_back(0.0);
    for (const Jump& j : p.jumps()) breakers.push_back(j.time);

    auto window_delta = [&](int i, int j) {
        double gap = std::fabs(post[j] - pre[i]);
        double s = times[i], t = times[j];
        double delta = gap / 2.0;
        for (double tau : breakers) {
            double allowed;
            if (tau <= s)
                allowed = s - tau;
            else if (tau > t)
                allowed = tau - t;
            else
                allowed = 0.0;
            delta = std::min(delta, allowed);
            if (delta == 0.0) break;
        }
        return delta;
    };

    double best = 0.0;
    bool full = m <= pair_cap;
    for (int i = 0; i < m; ++i) {
        int j_hi = full ? m : std::min(m, i + 6);
        for (int j = i; j < j_hi; ++j)
            best = std::max(best, window_delta(i, j));
    }
    if (!full) {
        // still scan the widest windows from each start, and the full span
        for (int i = 0; i < m; ++i) best = std::max(best, window_delta(i, m - 1));
        best = std::max(best, window_delta(0, m - 1));
    }
    return best;
}

double fattening_distance(const StepPath& p, const std::vector<StepPath>& family,
                          PathMetric metric, double tol_or_density) {
    if (family.empty())
        throw std::invalid_argument("fattening_distance: family must be nonempty");
    double best = kInf;
    for (const StepPath& f : family) {
        double d = (metric == PathMetric::j1) ? j1_distance(p, f, tol_or_density)
                                              : m1prime_upper(p, f, tol_or_density);
        best = std::min(best, d);
        if (best == 0.0) break;
    }
    return best;
}

} // namespace heavytail
