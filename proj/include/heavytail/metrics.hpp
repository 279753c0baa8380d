#pragma once

#include <vector>

#include "heavytail/step_path.hpp"

namespace heavytail {

// Exact uniform (sup) distance between two step paths.
double uniform_distance(const StepPath& p, const StepPath& q);

// Skorokhod J1 distance within +/- tol, by bisection on epsilon with a
// feasibility test: a monotone matching of p's jumps to placements within
// epsilon of their original times (order-consistent with q's jumps, endpoint
// pinned homeomorphism) such that every intermediate value discrepancy stays
// within epsilon. Feasibility is a dynamic program over (jumps of p consumed,
// jumps of q consumed) that tracks the earliest admissible time of the last
// event. Jumps at t = 1 are pinned: they can only align with jumps at t = 1.
double j1_distance(const StepPath& p, const StepPath& q, double tol = 1e-6);

// Upper bound on d_{M1'}: bottleneck alignment (min over monotone alignments
// of the max l-inf mismatch) of the two discretized completed graphs. Any
// alignment interpolates to a genuine parametrization pair, so the value is a
// certified upper bound at every density and converges to d_{M1'} as
// density -> 0.
double m1prime_upper(const StepPath& p, const StepPath& q, double density = 1e-3);
double m1prime_upper(const GridPath& p, const GridPath& q, double density = 1e-3);

// Certified lower bound: max over sampled points z of one graph of the exact
// l-inf distance to the other graph (both directions).
double m1prime_lower_pointgap(const StepPath& p, const StepPath& q,
                              double density = 1e-3);

// Certified lower bound: the largest delta such that q moves by at least
// 2*delta across some interval [s, t] while p is constant on
// [s - delta, t + delta] intersected with [0,1]. For paths with more than
// `pair_cap` jumps only a subset of (s, t) windows is scanned, which keeps
// the value a valid lower bound.
double m1prime_lower_flatjump(const StepPath& p, const StepPath& q,
                              int pair_cap = 200);

enum class PathMetric { j1, m1prime };

// inf over the family of the chosen distance (M1' uses the upper bound).
double fattening_distance(const StepPath& p, const std::vector<StepPath>& family,
                          PathMetric metric, double tol_or_density = 1e-3);

// Axis-aligned segment of a completed graph; used by the point-gap bound.
struct GraphSegment {
    bool vertical;
    double t0, t1;     // time range (t0 == t1 for vertical)
    double v0, v1;     // value range (v0 == v1 for horizontal)
};

std::vector<GraphSegment> graph_segments(const StepPath& p);

// Exact l-inf distance from a point to the union of segments.
double point_to_graph(const GraphPoint& z, const std::vector<GraphSegment>& segs);

} // namespace heavytail
