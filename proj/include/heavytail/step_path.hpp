#pragma once

#include <optional>
#include <vector>

namespace heavytail {

struct Jump {
    double time;
    double size;
};

// Canonical cadlag pure-jump path on [0,1]: an initial value (the value at
// t = 0, with the convention xi(0-) = 0) plus finitely many jumps at strictly
// increasing times in (0,1]. Construction canonicalizes: jumps are sorted,
// simultaneous jumps merged, zero jumps dropped, and a jump at t = 0 is
// folded into the initial value.
class StepPath {
public:
    StepPath() = default;
    StepPath(double initial, std::vector<Jump> jumps);

    // z * 1_{[v,1]}; v = 0 yields a path with initial value z.
    static StepPath indicator(double z, double v);

    double initial() const { return initial_; }
    const std::vector<Jump>& jumps() const { return jumps_; }
    int jump_count() const { return static_cast<int>(jumps_.size()); }

    double value(double t) const;      // xi(t)
    double left_limit(double t) const; // xi(t-), xi(0-) = 0
    double value_after(int i) const;   // value after the first i jumps
    double final_value() const { return value_after(jump_count()); }

    // |initial| + sum |sizes|; the arc length of the vertical part of the
    // completed graph.
    double total_variation() const;

    StepPath operator+(const StepPath& other) const;

private:
    double initial_ = 0.0;
    std::vector<Jump> jumps_;
    std::vector<double> prefix_; // prefix_[i] = value after i jumps
};

// Uniformly sampled path: values at t = 0, 1/m, ..., 1.
struct GridPath {
    int resolution = 0;              // m
    std::vector<double> values;      // m + 1 entries

    GridPath() = default;
    GridPath(int m, std::vector<double> v);
    double time_at(int j) const { return static_cast<double>(j) / resolution; }
};

// Reinterpret grid increments as jumps at grid times.
StepPath grid_to_step(const GridPath& g);

// A point of the extended completed graph Gamma(xi), ordered by time and,
// within a time, by distance from the left limit.
struct GraphPoint {
    double value;
    double time;
};

// Gamma(xi) sampled at spacing <= density along every horizontal and
// vertical segment, corner points included exactly, in the graph order.
// Includes the vertical segment at t = 0 from xi(0-) = 0 when initial != 0.
std::vector<GraphPoint> completed_graph(const StepPath& p, double density);
std::vector<GraphPoint> completed_graph(const GridPath& p, double density);

// Membership in the D-subspace families.
//   D_{=j}:     xi(0) = 0, nondecreasing pure jump, continuous at 1, j jumps
//   Dt_{=j}:    xi(0) = 0, nondecreasing pure jump, j jumps
//   Dh_{=j}:    xi(0) >= 0, nondecreasing pure jump, j jumps (a positive
//               initial value counts as a jump at time 0)
struct PathClass {
    bool nondecreasing_pure_jump = false; // the D^up flag
    std::optional<int> d_count;
    std::optional<int> d_tilde_count;
    std::optional<int> d_hat_count;
};

PathClass classify(const StepPath& p);

} // namespace heavytail
