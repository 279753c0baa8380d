#include "heavytail/limits.hpp"

#include <cmath>
#include <stdexcept>

#include "heavytail/special_functions.hpp"

namespace heavytail {

namespace {

const char* kNames[] = {"limit1", "limit2", "limit3", "limit4", "limit5",
                        "limit6", "limit7", "limit8", "limit9"};

double require(const std::map<std::string, double>& aux, const std::string& key) {
    auto it = aux.find(key);
    if (it == aux.end())
        throw std::invalid_argument("verify_limit: aux is missing '" + key + "'");
    return it->second;
}

// log Qt(x) = log(tail(x)/tail(1)), analytic.
double log_qt(const TailParams& p, double x) {
    return -r_eval(p, std::log(x)) - std::log(p.c);
}

} // namespace

const char* limit_name(LimitId id) { return kNames[static_cast<int>(id)]; }

LimitId limit_from_name(const std::string& name) {
    for (int i = 0; i < 9; ++i)
        if (name == kNames[i]) return static_cast<LimitId>(i);
    throw std::invalid_argument("unknown limit id: " + name);
}

LimitCheckReport verify_limit(LimitId id, const TailParams& params,
                              const std::map<std::string, double>& aux,
                              const std::vector<std::int64_t>& n_grid) {
    if (n_grid.empty())
        throw std::invalid_argument("verify_limit: empty n grid");
    for (size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("verify_limit: n grid must be increasing");

    LimitCheckReport rep;
    rep.limit_id = id;
    rep.n_grid = n_grid;
    rep.target = 0.0;

    auto check_x = [&](double x) {
        if (!(x > 0.0)) throw std::invalid_argument("verify_limit: x must be > 0");
        return x;
    };

    for (std::int64_t n : n_grid) {
        double nd = static_cast<double>(n);
        double L = std::log(nd);
        double r = r_eval(params, L);
        double value = 0.0;
        switch (id) {
            case LimitId::limit1: {
                double x = check_x(require(aux, "x"));
                value = std::exp(log_q_n(params, nd, nd * x));
                rep.target = 0.0;
                break;
            }
            case LimitId::limit2: {
                double x = check_x(require(aux, "x"));
                value = std::exp(log_q_n(params, nd, nd * x)) / r;
                rep.target = 0.0;
                break;
            }
            case LimitId::limit3: {
                double x = check_x(require(aux, "x"));
                value = log_q_n(params, nd, nd * x) / r;
                rep.target = -1.0;
                break;
            }
            case LimitId::limit4: {
                double x1 = check_x(require(aux, "x1"));
                double x2 = check_x(require(aux, "x2"));
                if (!(x1 < x2))
                    throw std::invalid_argument("verify_limit: limit4 needs x1 < x2");
                double lq1 = log_q_n(params, nd, nd * x1);
                double lq2 = log_q_n(params, nd, nd * x2);
                value = (lq1 + log1mexp(lq2 - lq1)) / r;
                rep.target = -1.0;
                break;
            }
            case LimitId::limit5: {
                double c = check_x(require(aux, "c"));
                int i = static_cast<int>(require(aux, "i"));
                if (i < 1) throw std::invalid_argument("verify_limit: limit5 needs i >= 1");
                value = log_gamma_p_from_log(i, log_q_n(params, nd, nd * c)) / r;
                rep.target = -static_cast<double>(i);
                break;
            }
            case LimitId::limit6: {
                double x = check_x(require(aux, "x"));
                value = log_qt(params, nd * x) / (-log_qt(params, nd));
                rep.target = -1.0;
                break;
            }
            case LimitId::limit7: {
                double x1 = check_x(require(aux, "x1"));
                double x2 = check_x(require(aux, "x2"));
                if (!(x1 < x2))
                    throw std::invalid_argument("verify_limit: limit7 needs x1 < x2");
                double l1 = log_qt(params, nd * x1);
                double l2 = log_qt(params, nd * x2);
                value = (l1 + log1mexp(l2 - l1)) / (-log_qt(params, nd));
                rep.target = -1.0;
                break;
            }
            case LimitId::limit8: {
                double x = check_x(require(aux, "x"));
                double qt = std::exp(log_qt(params, nd * x));
                value = nd * std::log1p(-qt) / (-log_qt(params, nd));
                rep.target = 0.0;
                break;
            }
            case LimitId::limit9: {
                double x = check_x(require(aux, "x"));
                int i = static_cast<int>(require(aux, "i"));
                if (i < 0) throw std::invalid_argument("verify_limit: limit9 needs i >= 0");
                // V_(i+1) is the (i+1)-th smallest of n-1 uniforms; its CDF at y
                // is the binomial tail P(Bin(n-1, y) >= i+1).
                value = log_binomial_tail_from_log(n - 1, i + 1, log_qt(params, nd * x)) /
                        (-log_qt(params, nd));
                rep.target = -static_cast<double>(i + 1);
                break;
            }
        }
        rep.values.push_back(value);
    }
    rep.max_abs_error_at_largest_n = std::fabs(rep.values.back() - rep.target);
    return rep;
}

std::map<std::string, double> reference_limit_aux(LimitId id) {
    switch (id) {
        case LimitId::limit1:
        case LimitId::limit2:
        case LimitId::limit3:
        case LimitId::limit8:
            return {{"x", 1.0}};
        case LimitId::limit4:
        case LimitId::limit7:
            return {{"x1", 1.0}, {"x2", 2.0}};
        case LimitId::limit5:
            return {{"i", 1.0}, {"c", 1.0}};
        case LimitId::limit6:
            return {{"x", 2.0}};
        case LimitId::limit9:
            return {{"i", 1.0}, {"x", 2.0}};
    }
    return {};
}

} // namespace heavytail
