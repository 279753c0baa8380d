#include "heavytail/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace heavytail {

RateValue RateValue::finite(std::int64_t k) {
    if (k < 0) throw std::invalid_argument("RateValue: negative count");
    RateValue r;
    r.count_ = k;
    return r;
}

RateValue RateValue::infinite() {
    RateValue r;
    r.infinite_ = true;
    return r;
}

std::int64_t RateValue::count() const {
    if (infinite_) throw std::logic_error("RateValue: infinite has no count");
    return count_;
}

double RateValue::as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity()
                     : static_cast<double>(count_);
}

RateValue rate_j1(const StepPath& p) {
    PathClass c = classify(p);
    if (!c.d_count) return RateValue::infinite();
    return RateValue::finite(*c.d_count);
}

RateValue rate_m1prime(const StepPath& p) {
    PathClass c = classify(p);
    if (!c.d_hat_count) return RateValue::infinite();
    return RateValue::finite(*c.d_hat_count);
}

RateValue rate_rw(const StepPath& p) {
    PathClass c = classify(p);
    if (!c.d_tilde_count) return RateValue::infinite();
    return RateValue::finite(*c.d_tilde_count);
}

namespace {

// A grid path certifies a step shape only when moving cells are isolated:
// between two genuine jumps a cadlag step path is flat, so adjacent moving
// cells mean the resolution cannot separate the motion from a continuum.
bool grid_is_resolvable_step(const GridPath& g) {
    bool prev_moved = false;
    for (int j = 1; j <= g.resolution; ++j) {
        bool moved = g.values[j] != g.values[j - 1];
        if (moved && prev_moved) return false;
        prev_moved = moved;
    }
    return true;
}

} // namespace

RateValue rate_j1(const GridPath& p) {
    if (!grid_is_resolvable_step(p)) return RateValue::infinite();
    return rate_j1(grid_to_step(p));
}

RateValue rate_m1prime(const GridPath& p) {
    if (!grid_is_resolvable_step(p)) return RateValue::infinite();
    return rate_m1prime(grid_to_step(p));
}

RateValue rate_rw(const GridPath& p) {
    if (!grid_is_resolvable_step(p)) return RateValue::infinite();
    return rate_rw(grid_to_step(p));
}

RateValue rate_k_vector(const std::vector<double>& x) {
    std::int64_t count = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0))
            throw std::invalid_argument("rate_k_vector: coordinates must be >= 0");
        if (i > 0 && x[i] > x[i - 1])
            throw std::invalid_argument("rate_k_vector: vector must be nonincreasing");
        if (x[i] != 0.0) ++count;
    }
    return RateValue::finite(count);
}

double rate_multi(const std::vector<StepPath>& paths,
                  const std::vector<double>& lambdas, RateKind kind) {
    if (paths.size() != lambdas.size())
        throw std::invalid_argument("rate_multi: size mismatch");
    double total = 0.0;
    for (size_t i = 0; i < paths.size(); ++i) {
        if (!(lambdas[i] > 0.0))
            throw std::invalid_argument("rate_multi: lambdas must be positive");
        RateValue r = (kind == RateKind::levy) ? rate_j1(paths[i]) : rate_rw(paths[i]);
        if (r.is_infinite()) return std::numeric_limits<double>::infinity();
        total += lambdas[i] * static_cast<double>(r.count());
    }
    return total;
}

PhiResult phi(const StepPath& p) {
    PhiResult r;
    r.sup = p.initial();
    r.max_jump = std::fabs(p.initial());
    for (int i = 0; i < p.jump_count(); ++i) {
        r.sup = std::max(r.sup, p.value_after(i + 1));
        r.max_jump = std::max(r.max_jump, std::fabs(p.jumps()[i].size));
    }
    return r;
}

PhiResult phi(const GridPath& p) {
    PhiResult r;
    r.sup = p.values[0];
    r.max_jump = std::fabs(p.values[0]);
    for (int j = 1; j <= p.resolution; ++j) {
        r.sup = std::max(r.sup, p.values[j]);
        r.max_jump = std::max(r.max_jump, std::fabs(p.values[j] - p.values[j - 1]));
    }
    return r;
}

RateValue rate_phi(double x, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("rate_phi: y must be > 0");
    if (!(x > 0.0)) return RateValue::finite(0);
    double ratio = x / y;
    // Guard against a ratio that floating point pushed just above an integer.
    double k = std::ceil(ratio - 1e-12 * std::max(1.0, std::fabs(ratio)));
    return RateValue::finite(static_cast<std::int64_t>(k));
}

} // namespace heavytail
