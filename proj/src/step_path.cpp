#include "heavytail/step_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heavytail {

StepPath::StepPath(double initial, std::vector<Jump> jumps) : initial_(initial) {
    if (!std::isfinite(initial))
        throw std::invalid_argument("StepPath: initial must be finite");
    for (const Jump& j : jumps) {
        if (!(j.time >= 0.0) || !(j.time <= 1.0))
            throw std::invalid_argument("StepPath: jump time outside [0,1]");
        if (!std::isfinite(j.size))
            throw std::invalid_argument("StepPath: jump size must be finite");
    }
    std::stable_sort(jumps.begin(), jumps.end(),
                     [](const Jump& a, const Jump& b) { return a.time < b.time; });
    for (const Jump& j : jumps) {
        if (j.size == 0.0) continue;
        if (j.time == 0.0) {
            initial_ += j.size;
            continue;
        }
        if (!jumps_.empty() && jumps_.back().time == j.time) {
            jumps_.back().size += j.size;
            if (jumps_.back().size == 0.0) jumps_.pop_back();
        } else {
            jumps_.push_back(j);
        }
    }
    prefix_.resize(jumps_.size() + 1);
    prefix_[0] = initial_;
    for (size_t i = 0; i < jumps_.size(); ++i)
        prefix_[i + 1] = prefix_[i] + jumps_[i].size;
}

StepPath StepPath::indicator(double z, double v) {
    if (v == 0.0) return StepPath(z, {});
    return StepPath(0.0, {{v, z}});
}

double StepPath::value(double t) const {
    if (prefix_.empty()) return initial_;
    // number of jumps with time <= t
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                               [](double tt, const Jump& j) { return tt < j.time; });
    return prefix_[static_cast<size_t>(it - jumps_.begin())];
}

double StepPath::left_limit(double t) const {
    if (t <= 0.0) return 0.0; // xi(0-) = 0 convention
    if (prefix_.empty()) return initial_;
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                               [](const Jump& j, double tt) { return j.time < tt; });
    return prefix_[static_cast<size_t>(it - jumps_.begin())];
}

double StepPath::value_after(int i) const {
    if (prefix_.empty()) return initial_;
    return prefix_[static_cast<size_t>(i)];
}

double StepPath::total_variation() const {
    double tv = std::fabs(initial_);
    for (const Jump& j : jumps_) tv += std::fabs(j.size);
    return tv;
}

StepPath StepPath::operator+(const StepPath& other) const {
    std::vector<Jump> all = jumps_;
    all.insert(all.end(), other.jumps_.begin(), other.jumps_.end());
    return StepPath(initial_ + other.initial_, std::move(all));
}

GridPath::GridPath(int m, std::vector<double> v) : resolution(m), values(std::move(v)) {
    if (m < 1) throw std::invalid_argument("GridPath: resolution must be >= 1");
    if (values.size() != static_cast<size_t>(m) + 1)
        throw std::invalid_argument("GridPath: needs m + 1 values");
}

StepPath grid_to_step(const GridPath& g) {
    std::vector<Jump> jumps;
    for (int j = 1; j <= g.resolution; ++j) {
        double d = g.values[j] - g.values[j - 1];
        if (d != 0.0) jumps.push_back({g.time_at(j), d});
    }
    return StepPath(g.values[0], std::move(jumps));
}

namespace {

void sample_vertical(std::vector<GraphPoint>& out, double t, double from,
                     double to, double density) {
    double len = std::fabs(to - from);
    int steps = std::max(1, static_cast<int>(std::ceil(len / density)));
    for (int s = 1; s < steps; ++s)
        out.push_back({from + (to - from) * s / steps, t});
    out.push_back({to, t}); // corner, exactly
}

void sample_horizontal(std::vector<GraphPoint>& out, double v, double from,
                       double to, double density) {
    double len = to - from;
    int steps = std::max(1, static_cast<int>(std::ceil(len / density)));
    for (int s = 1; s < steps; ++s)
        out.push_back({v, from + len * s / steps});
    out.push_back({v, to}); // corner, exactly
}

} // namespace

std::vector<GraphPoint> completed_graph(const StepPath& p, double density) {
    if (!(density > 0.0))
        throw std::invalid_argument("completed_graph: density must be > 0");
    std::vector<GraphPoint> out;
    out.reserve(static_cast<size_t>(p.total_variation() / density) + 4 * p.jumps().size() + 16);
    out.push_back({0.0, 0.0}); // xi(0-) = 0
    double cur = 0.0;
    if (p.initial() != 0.0) {
        sample_vertical(out, 0.0, 0.0, p.initial(), density);
        cur = p.initial();
    }
    double t_cur = 0.0;
    for (int i = 0; i < p.jump_count(); ++i) {
        const Jump& j = p.jumps()[i];
        if (j.time > t_cur) {
            sample_horizontal(out, cur, t_cur, j.time, density);
            t_cur = j.time;
        }
        sample_vertical(out, j.time, cur, cur + j.size, density);
        cur += j.size;
    }
    if (t_cur < 1.0) sample_horizontal(out, cur, t_cur, 1.0, density);
    return out;
}

std::vector<GraphPoint> completed_graph(const GridPath& p, double density) {
    return completed_graph(grid_to_step(p), density);
}

PathClass classify(const StepPath& p) {
    PathClass c;
    bool positive_sizes = true;
    for (const Jump& j : p.jumps())
        if (!(j.size > 0.0)) positive_sizes = false;
    c.nondecreasing_pure_jump = positive_sizes;
    if (!positive_sizes) return c;

    bool jump_at_one = !p.jumps().empty() && p.jumps().back().time == 1.0;
    int n = p.jump_count();
    if (p.initial() == 0.0) {
        c.d_tilde_count = n;
        if (!jump_at_one) c.d_count = n;
    }
    if (p.initial() >= 0.0)
        c.d_hat_count = n + (p.initial() > 0.0 ? 1 : 0);
    return c;
}

} // namespace heavytail
