#include "heavytail/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace heavytail {

json to_json(const TailParams& p) {
    return json{{"c", p.c}, {"beta", p.beta}, {"lambda", p.lambda}, {"gamma", p.gamma}};
}

TailParams tail_params_from_json(const json& j) {
    return TailParams(j.at("c").get<double>(), j.at("beta").get<double>(),
                      j.at("lambda").get<double>(), j.at("gamma").get<double>());
}

json to_json(const LevyConfig& cfg) {
    json j{{"tail", to_json(cfg.tail)}, {"a", cfg.a}, {"b", cfg.b}};
    if (cfg.small_jump)
        j["small_jump"] = json{{"kappa", cfg.small_jump->kappa},
                               {"alpha", cfg.small_jump->alpha}};
    else
        j["small_jump"] = nullptr;
    return j;
}

LevyConfig levy_config_from_json(const json& j) {
    LevyConfig cfg(tail_params_from_json(j.at("tail")));
    cfg.a = j.value("a", 0.0);
    cfg.b = j.value("b", 0.0);
    if (j.contains("small_jump") && !j.at("small_jump").is_null()) {
        const json& s = j.at("small_jump");
        cfg.small_jump = SmallJumpSpec(s.at("kappa").get<double>(),
                                       s.at("alpha").get<double>());
    }
    return cfg;
}

json to_json(const StepPath& p) {
    json jumps = json::array();
    for (const Jump& j : p.jumps()) jumps.push_back(json::array({j.time, j.size}));
    return json{{"initial", p.initial()}, {"jumps", jumps}};
}

StepPath step_path_from_json(const json& j) {
    std::vector<Jump> jumps;
    for (const auto& e : j.at("jumps"))
        jumps.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    return StepPath(j.at("initial").get<double>(), std::move(jumps));
}

json to_json(const EstimateResult& r) {
    return json{{"n", r.n},
                {"trials", r.trials},
                {"hits", r.hits},
                {"p_hat", r.p_hat},
                {"ci_low", r.ci_low},
                {"ci_high", r.ci_high},
                {"log_ratio", std::isnan(r.log_ratio) ? json(nullptr) : json(r.log_ratio)},
                {"estimator", r.estimator},
                {"zero_hits", r.zero_hits}};
}

json to_json(const LdpReport& r) {
    json results = json::array();
    for (const auto& e : r.results) results.push_back(to_json(e));
    return json{{"event", r.event_name},
                {"results", results},
                {"terminal_log_ratio",
                 std::isnan(r.terminal_log_ratio) ? json(nullptr)
                                                  : json(r.terminal_log_ratio)},
                {"band_low", r.band_low},
                {"band_high", r.band_high},
                {"monotone_log_prob", r.monotone_log_prob},
                {"verdict", r.verdict}};
}

json to_json(const LimitCheckReport& r) {
    return json{{"limit", limit_name(r.limit_id)},
                {"n_grid", r.n_grid},
                {"values", r.values},
                {"target", r.target},
                {"max_abs_error_at_largest_n", r.max_abs_error_at_largest_n}};
}

json to_json(const OneBigJumpReport& r) {
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back(json{{"n", p.n},
                           {"ratio", p.ratio},
                           {"ci_low", p.ci_low},
                           {"ci_high", p.ci_high},
                           {"in_regime", p.in_regime}});
    return json{{"x", r.x}, {"p1_hat", r.p1_hat}, {"points", pts}};
}

json to_json(const TruncatedSumReport& r) {
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back(json{{"n", p.n},
                           {"log_ratio", p.log_ratio},
                           {"log_ratio_reversed",
                            std::isinf(p.log_ratio_reversed)
                                ? json(nullptr)
                                : json(p.log_ratio_reversed)}});
    return json{{"delta", r.delta},
                {"eps", r.eps},
                {"m_factor", r.m_factor},
                {"bound", r.bound},
                {"points", pts}};
}

json to_json(const Lemma31Report& r) {
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back(json{{"n", p.n},
                           {"late_v_min", p.late_v.min_bound},
                           {"late_v_count", p.late_v.eta_count},
                           {"early_v_min", p.early_v.min_bound},
                           {"early_v_count", p.early_v.eta_count}});
    return json{{"points", pts}, {"overall_min", r.overall_min}};
}

json to_json(const Lemma32Report& r) {
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back(json{{"n", p.n},
                           {"term_iii", p.term_iii},
                           {"term_iv", p.term_iv},
                           {"term_iv_matched", p.term_iv_matched},
                           {"term_v", p.term_v},
                           {"h_in_c_prob", p.h_in_c_prob},
                           {"combined_log_ratio", p.combined_log_ratio}});
    return json{{"gamma", r.gamma},
                {"analytic_target", r.analytic_target},
                {"points", pts}};
}

std::string limit_report_csv(const LimitCheckReport& r) {
    std::ostringstream os;
    os << "n,value,target\n";
    os.precision(15);
    for (size_t i = 0; i < r.n_grid.size(); ++i)
        os << r.n_grid[i] << "," << r.values[i] << "," << r.target << "\n";
    return os.str();
}

std::string ldp_report_csv(const LdpReport& r) {
    std::ostringstream os;
    os << "n,p_hat,ci_low,ci_high,log_ratio\n";
    os.precision(15);
    for (const auto& e : r.results) {
        os << e.n << "," << e.p_hat << "," << e.ci_low << "," << e.ci_high << ",";
        if (std::isnan(e.log_ratio))
            os << "";
        else
            os << e.log_ratio;
        os << "\n";
    }
    return os.str();
}

std::string path_csv(const StepPath& p, int grid_points) {
    std::ostringstream os;
    os << "t,value\n";
    os.precision(15);
    for (int i = 0; i <= grid_points; ++i) {
        double t = static_cast<double>(i) / grid_points;
        os << t << "," << p.value(t) << "\n";
    }
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

std::string content_hash(const std::string& content) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace heavytail
