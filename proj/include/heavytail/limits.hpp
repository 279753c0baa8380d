#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "heavytail/tail_model.hpp"

namespace heavytail {

// The nine asymptotic ratios used throughout the proofs, evaluated
// analytically on an n-grid (closed forms throughout; no Monte Carlo).
//
//   limit1  Q_n(nx)                               -> 0
//   limit2  Q_n(nx) / r(log n)                    -> 0
//   limit3  log Q_n(nx) / r(log n)                -> -1
//   limit4  log(Q_n(nx1) - Q_n(nx2)) / r(log n)   -> -1   (0 < x1 < x2)
//   limit5  log P(Gamma_i <= Q_n(nc)) / r(log n)  -> -i   (Erlang CDF)
//   limit6  log Qt(nx) / (-log Qt(n))             -> -1
//   limit7  log(Qt(nx1) - Qt(nx2)) / (-log Qt(n)) -> -1   (0 < x1 < x2)
//   limit8  n log(1 - Qt(nx)) / (-log Qt(n))      -> 0
//   limit9  log P(V_(i+1) <= Qt(nx)) / (-log Qt(n)) -> -(i+1)  (Beta CDF)
//
// Qt(x) = P(Z >= x) = tail(x)/tail(1); V_(j) is the j-th smallest of n-1
// iid uniforms, so V_(i+1) ~ Beta(i+1, n-1-i).
enum class LimitId {
    limit1, limit2, limit3, limit4, limit5,
    limit6, limit7, limit8, limit9,
};

const char* limit_name(LimitId id);
LimitId limit_from_name(const std::string& name);

struct LimitCheckReport {
    LimitId limit_id;
    std::vector<std::int64_t> n_grid;
    std::vector<double> values;
    double target;
    double max_abs_error_at_largest_n;
};

// aux carries exactly the parameters the chosen limit needs:
//   x            limits 1,2,3,6,8
//   x1, x2       limits 4,7 (x1 < x2)
//   i, c         limit 5
//   i, x         limit 9
LimitCheckReport verify_limit(LimitId id, const TailParams& params,
                              const std::map<std::string, double>& aux,
                              const std::vector<std::int64_t>& n_grid);

// The aux values used by the acceptance run (chosen so the n = 1e8 error is
// inside the 0.1 band for every limit).
std::map<std::string, double> reference_limit_aux(LimitId id);

} // namespace heavytail
