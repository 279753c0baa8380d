#pragma once

#include <cstdint>
#include <vector>

#include "heavytail/step_path.hpp"

namespace heavytail {

// Extended natural number: a finite jump count or infinity. The codomain of
// every rate function here.
class RateValue {
public:
    static RateValue finite(std::int64_t k);
    static RateValue infinite();

    bool is_infinite() const { return infinite_; }
    std::int64_t count() const;
    double as_double() const;

    bool operator==(const RateValue& o) const {
        return infinite_ == o.infinite_ && (infinite_ || count_ == o.count_);
    }
    bool operator!=(const RateValue& o) const { return !(*this == o); }

private:
    bool infinite_ = false;
    std::int64_t count_ = 0;
};

// I^{J1}: jump count on D_{<infty}, infinity otherwise.
RateValue rate_j1(const StepPath& p);
// I^{M1'}: jump count on Dhat_{<infty} (a positive start counts as a jump).
RateValue rate_m1prime(const StepPath& p);
// Random-walk rate: jump count on Dtilde_{<infty} (jump at 1 allowed).
RateValue rate_rw(const StepPath& p);

// Grid overloads. A grid path is accepted as a step path only when its
// nonzero increments are isolated (no two adjacent cells both move); a
// continuous ramp fails that test at every resolution and maps to infinity.
RateValue rate_j1(const GridPath& p);
RateValue rate_m1prime(const GridPath& p);
RateValue rate_rw(const GridPath& p);

// Check I_k on jump-size vectors: the number of nonzero coordinates of a
// nonincreasing nonnegative vector.
RateValue rate_k_vector(const std::vector<double>& x);

enum class RateKind { levy, rw };

// Multidimensional rate: sum of lambda_i * (jump count of xi_i) when every
// coordinate lies in the required subspace, +infinity otherwise.
double rate_multi(const std::vector<StepPath>& paths,
                  const std::vector<double>& lambdas, RateKind kind);

struct PhiResult {
    double sup;      // sup_t xi(t)
    double max_jump; // sup_t |xi(t) - xi(t-)|, with xi(0-) = 0
};
PhiResult phi(const StepPath& p);
PhiResult phi(const GridPath& p);

// I_phi(x, y) = ceil(x / y) for x > 0 (0 otherwise); y > 0.
RateValue rate_phi(double x, double y);

} // namespace heavytail
