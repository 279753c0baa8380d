// Batch front-end: config-driven experiment runner plus ad-hoc path queries.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "heavytail/counterexample.hpp"
#include "heavytail/limits.hpp"
#include "heavytail/rare_event.hpp"
#include "heavytail/serialization.hpp"

namespace fs = std::filesystem;
using heavytail::json;

namespace {

struct ExperimentOutcome {
    std::string name;
    std::string status; // "ok" or the error text
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::int64_t> n_grid_from(const json& e, const char* key = "n_grid") {
    std::vector<std::int64_t> grid;
    for (const auto& v : e.at(key)) grid.push_back(v.get<std::int64_t>());
    return grid;
}

json rate_record(const heavytail::StepPath& p) {
    auto fmt = [](heavytail::RateValue r) {
        return r.is_infinite() ? json("inf") : json(r.count());
    };
    return json{{"I_J1", fmt(heavytail::rate_j1(p))},
                {"I_M1p", fmt(heavytail::rate_m1prime(p))},
                {"I_rw", fmt(heavytail::rate_rw(p))}};
}

// One experiment dispatch; writes artifacts into out_dir and returns the
// file list.
std::vector<std::string> run_experiment(const json& e, const json& config,
                                        const fs::path& out_dir,
                                        std::uint64_t seed) {
    using namespace heavytail;
    const std::string kind = e.at("kind").get<std::string>();
    const std::string name = e.at("name").get<std::string>();
    TailParams tail_params = tail_params_from_json(config.at("tail"));
    LevyConfig cfg = config.contains("levy") ? levy_config_from_json(config.at("levy"))
                                             : LevyConfig(tail_params);
    std::vector<std::string> outputs;
    auto emit = [&](const std::string& suffix, const std::string& content) {
        fs::path p = out_dir / (name + suffix);
        write_file_atomic(p.string(), content);
        outputs.push_back(p.filename().string());
    };

    if (kind == "verify-limits") {
        auto grid = n_grid_from(e);
        json all = json::array();
        for (int i = 0; i < 9; ++i) {
            LimitId id = static_cast<LimitId>(i);
            auto aux = reference_limit_aux(id);
            if (e.contains("aux") && e.at("aux").contains(limit_name(id)))
                for (auto& [k, v] : e.at("aux").at(limit_name(id)).items())
                    aux[k] = v.get<double>();
            LimitCheckReport rep = verify_limit(id, tail_params, aux, grid);
            emit(std::string("_") + limit_name(id) + ".csv", limit_report_csv(rep));
            all.push_back(to_json(rep));
        }
        emit(".json", json{{"limits", all}}.dump(2));
    } else if (kind == "one-big-jump") {
        auto grid = n_grid_from(e);
        std::int64_t budget = e.value("budget", 100000);
        double x;
        if (e.contains("x")) {
            x = e.at("x").get<double>();
        } else {
            // pilot run: empirical quantile of X(1)
            double q = e.value("x_quantile", 1e-3);
            std::int64_t pilot = e.value("pilot_trials", 200000);
            MomentCache mom = moments(cfg.tail);
            Rng rng = Rng::derive(seed, 0x9e1);
            std::vector<double> xs(pilot);
            for (auto& v : xs) v = sample_x_endpoint(cfg, mom, 1.0, rng);
            std::sort(xs.begin(), xs.end());
            x = xs[static_cast<size_t>((1.0 - q) * (pilot - 1))];
        }
        OneBigJumpReport rep = one_big_jump_check(cfg, x, grid, budget, seed);
        emit(".json", to_json(rep).dump(2));
        std::ostringstream csv;
        csv << "n,ratio,ci_low,ci_high,in_regime\n";
        for (const auto& p : rep.points)
            csv << p.n << "," << p.ratio << "," << p.ci_low << "," << p.ci_high
                << "," << (p.in_regime ? 1 : 0) << "\n";
        emit(".csv", csv.str());
    } else if (kind == "boundary-crossing") {
        auto grid = n_grid_from(e);
        double b = e.at("b").get<double>();
        double c = e.at("c").get<double>();
        double margin = e.value("margin", 0.1);
        int j = e.value("j", static_cast<int>(std::ceil(b / c)));
        EventSpec ev;
        ev.name = name;
        ev.params = {{"b", b}, {"c", c}};
        ev.path_pred = [b, c](const XBarSample& s) {
            double sup = 0.0;
            for (double v : s.total.values) sup = std::max(sup, v);
            return sup >= b && s.max_cp_jump <= c;
        };
        ev.conditioning_threshold = c * (1.0 - margin);
        int target = static_cast<int>(std::ceil(b / c));
        ev.analytic_inner_rate = RateValue::finite(target);
        ev.analytic_outer_rate = RateValue::finite(target);
        SamplerSpec sampler{cfg};
        sampler.k = std::max(j, 3);
        sampler.resolution = e.value("resolution", 256);
        SlopeCheckOptions opt;
        opt.conditioning_jumps = j;
        opt.trials = e.value("budget", 50000);
        opt.seed = seed;
        opt.band_tolerance = e.value("band_tolerance", 0.5);
        LdpReport rep = ldp_slope_check(ev, sampler, grid, opt);
        emit(".json", to_json(rep).dump(2));
        emit(".csv", ldp_report_csv(rep));
    } else if (kind == "k-jump-slope") {
        auto grid = n_grid_from(e);
        int idx = e.at("jump_index").get<int>();
        double x = e.at("x").get<double>();
        EventSpec ev;
        ev.name = name;
        ev.params = {{"x", x}, {"jump_index", static_cast<double>(idx)}};
        std::vector<std::pair<double, double>> rect(
            idx, {0.0, std::numeric_limits<double>::infinity()});
        rect[idx - 1].first = x;
        ev.rectangle = rect;
        ev.analytic_inner_rate = RateValue::finite(idx);
        ev.analytic_outer_rate = RateValue::finite(idx);
        SamplerSpec sampler{cfg};
        SlopeCheckOptions opt;
        opt.seed = seed;
        LdpReport rep = ldp_slope_check(ev, sampler, grid, opt);
        emit(".json", to_json(rep).dump(2));
        emit(".csv", ldp_report_csv(rep));
    } else if (kind == "truncated-sum") {
        auto grid = n_grid_from(e);
        TruncatedSumReport rep = truncated_sum_tail_check(
            tail_params, e.at("delta").get<double>(), e.at("eps").get<double>(),
            e.value("m_factor", 2), grid, e.value("budget", 10000), seed);
        emit(".json", to_json(rep).dump(2));
    } else if (kind == "lemma31") {
        CounterexampleParams params(tail_params);
        Lemma31Report rep =
            lemma31_evidence(params, n_grid_from(e, "n_list"),
                             e.value("samples_per_n", 4), e.value("v_grid", 200), seed);
        emit(".json", to_json(rep).dump(2));
    } else if (kind == "lemma32") {
        auto grid = n_grid_from(e);
        Lemma32Report rep = lemma32_experiment(cfg, grid, e.value("budget", 400),
                                               e.value("resolution", 128), seed);
        emit(".json", to_json(rep).dump(2));
        std::ostringstream csv;
        csv << "n,term_iii,term_iv,term_iv_matched,term_v,h_in_c_prob,combined\n";
        for (const auto& p : rep.points)
            csv << p.n << "," << p.term_iii << "," << p.term_iv << ","
                << p.term_iv_matched << "," << p.term_v << "," << p.h_in_c_prob
                << "," << p.combined_log_ratio << "\n";
        emit(".csv", csv.str());
    } else if (kind == "simulate") {
        std::int64_t n = e.at("n").get<std::int64_t>();
        int k = e.value("k", 3);
        std::int64_t trials = e.value("trials", 2);
        int resolution = e.value("resolution", 256);
        MomentCache mom = moments(cfg.tail);
        std::ostringstream lines;
        for (std::int64_t t = 0; t < trials; ++t) {
            Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
            XBarSample s = sample_x_bar(cfg, mom, n, k, resolution, rng);
            json rec{{"seed", seed},
                     {"trial", t},
                     {"n", n},
                     {"k", k},
                     {"j_hat", to_json(s.j_hat)},
                     {"j_check", to_json(s.j_check)},
                     {"x_bar_endpoint", s.total.values.back()},
                     {"max_cp_jump", s.max_cp_jump}};
            lines << rec.dump() << "\n";
        }
        emit(".jsonl", lines.str());
    } else {
        throw std::runtime_error("unknown experiment kind: " + kind);
    }
    return outputs;
}

int cmd_run(const std::string& config_path, std::optional<std::string> out_override,
            std::optional<std::uint64_t> seed_override) {
    std::string raw = read_file(config_path);
    json config = json::parse(raw);
    fs::path out_dir = out_override ? *out_override
                                    : config.value("output_dir", std::string("out"));
    fs::create_directories(out_dir);

    std::vector<ExperimentOutcome> outcomes;
    bool any_failed = false;
    if (config.contains("experiments")) {
        for (const auto& e : config.at("experiments")) {
            ExperimentOutcome oc;
            oc.name = e.value("name", std::string("unnamed"));
            oc.seed = seed_override ? *seed_override
                                    : e.value("seed", static_cast<std::uint64_t>(1));
            try {
                oc.outputs = run_experiment(e, config, out_dir, oc.seed);
                oc.status = "ok";
            } catch (const std::exception& ex) {
                oc.status = std::string("error: ") + ex.what();
                any_failed = true;
            }
            outcomes.push_back(std::move(oc));
            std::cerr << "[" << oc.status << "] " << outcomes.back().name << "\n";
        }
    }

    json manifest;
    manifest["config_hash"] = heavytail::content_hash(raw);
    json seeds = json::object();
    json exps = json::array();
    for (const auto& oc : outcomes) {
        seeds[oc.name] = oc.seed;
        exps.push_back(json{{"name", oc.name},
                            {"status", oc.status},
                            {"outputs", oc.outputs}});
    }
    manifest["seeds"] = seeds;
    manifest["experiments"] = exps;
    heavytail::write_file_atomic((out_dir / "manifest.json").string(),
                                 manifest.dump(2) + "\n");
    return any_failed ? 1 : 0;
}

int cmd_report(const std::string& dir) {
    json manifest = json::parse(read_file((fs::path(dir) / "manifest.json").string()));
    std::cout << "config hash: " << manifest.at("config_hash").get<std::string>()
              << "\n";
    for (const auto& e : manifest.at("experiments")) {
        std::cout << e.at("name").get<std::string>() << ": "
                  << e.at("status").get<std::string>();
        for (const auto& f : e.at("outputs")) {
            fs::path p = fs::path(dir) / f.get<std::string>();
            if (p.extension() == ".json") {
                try {
                    json j = json::parse(read_file(p.string()));
                    if (j.contains("terminal_log_ratio") &&
                        !j.at("terminal_log_ratio").is_null())
                        std::cout << "  terminal_log_ratio="
                                  << j.at("terminal_log_ratio").get<double>();
                    if (j.contains("verdict"))
                        std::cout << " verdict=" << j.at("verdict").get<std::string>();
                } catch (...) {
                }
            }
        }
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heavy-tailed sample-path large deviations toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir_s, metric = "j1", report_dir;
    std::optional<std::string> out_override;
    std::optional<std::uint64_t> seed_override;
    int threads = 0;
    double tol = 1e-6, density = 1e-3;
    std::string experiment_name;
    std::int64_t sim_n = 50, sim_trials = 2;
    int sim_k = 3, sim_resolution = 256;
    std::uint64_t sim_seed = 1;

    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* run = app.add_subcommand("run", "execute the experiments in a config");
    run->add_option("--config", config_path, "config JSON path")->required();
    std::string run_out;
    run->add_option("--out", run_out, "output directory (overrides config)");
    std::uint64_t seed_opt = 0;
    bool seed_set = false;
    run->add_option("--seed-override", seed_opt, "seed for every experiment")
        ->each([&](const std::string&) { seed_set = true; });

    auto* simulate = app.add_subcommand("simulate", "dump sampled paths as JSON lines");
    simulate->add_option("--config", config_path, "config JSON (tail/levy)");
    simulate->add_option("--n", sim_n, "scale parameter n");
    simulate->add_option("--k", sim_k, "largest-jump split k");
    simulate->add_option("--trials", sim_trials, "number of paths");
    simulate->add_option("--resolution", sim_resolution, "grid resolution");
    simulate->add_option("--seed", sim_seed, "seed");

    auto* distance = app.add_subcommand(
        "distance", "distance between two step paths (JSON array on stdin)");
    distance->add_option("--metric", metric, "j1 | m1p | uniform");
    distance->add_option("--tol", tol, "J1 bisection tolerance");
    distance->add_option("--density", density, "M1' graph density");

    auto* rate = app.add_subcommand("rate", "rate functions of a step path (stdin)");
    (void)rate;

    auto* estimate = app.add_subcommand("estimate", "run one experiment by name");
    estimate->add_option("--config", config_path, "config JSON path")->required();
    estimate->add_option("--experiment", experiment_name, "experiment name")->required();
    std::string est_out = "out";
    estimate->add_option("--out", est_out, "output directory");

    auto* vlimits = app.add_subcommand("verify-limits", "limit lemma reports");
    vlimits->add_option("--config", config_path, "config JSON path");
    std::string vl_out = "out";
    vlimits->add_option("--out", vl_out, "output directory");

    auto* cx = app.add_subcommand("counterexample", "lemma evidence experiments");
    cx->add_option("--config", config_path, "config JSON path");
    std::string cx_out = "out";
    cx->add_option("--out", cx_out, "output directory");
    std::uint64_t cx_seed = 1;
    cx->add_option("--seed", cx_seed, "seed");

    auto* report = app.add_subcommand("report", "summarize a run directory");
    report->add_option("--dir", report_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads == 0) {
        if (const char* env = std::getenv("HEAVYTAIL_THREADS"))
            threads = std::atoi(env);
    }
    heavytail::set_thread_count(threads);

    try {
        if (run->parsed()) {
            if (!run_out.empty()) out_override = run_out;
            if (seed_set) seed_override = seed_opt;
            return cmd_run(config_path, out_override, seed_override);
        }
        if (simulate->parsed()) {
            json config = config_path.empty()
                              ? json{{"tail", {{"c", 1.0}, {"beta", 0.0}, {"lambda", 1.0}, {"gamma", 2.0}}}}
                              : json::parse(read_file(config_path));
            heavytail::LevyConfig cfg =
                config.contains("levy")
                    ? heavytail::levy_config_from_json(config.at("levy"))
                    : heavytail::LevyConfig(
                          heavytail::tail_params_from_json(config.at("tail")));
            heavytail::MomentCache mom = heavytail::moments(cfg.tail);
            for (std::int64_t t = 0; t < sim_trials; ++t) {
                heavytail::Rng rng = heavytail::Rng::derive(sim_seed, t);
                heavytail::XBarSample s = heavytail::sample_x_bar(
                    cfg, mom, sim_n, sim_k, sim_resolution, rng);
                json rec{{"seed", sim_seed},
                         {"trial", t},
                         {"n", sim_n},
                         {"k", sim_k},
                         {"j_hat", heavytail::to_json(s.j_hat)},
                         {"j_check", heavytail::to_json(s.j_check)},
                         {"x_bar_endpoint", s.total.values.back()},
                         {"max_cp_jump", s.max_cp_jump}};
                std::cout << rec.dump() << "\n";
            }
            return 0;
        }
        if (distance->parsed()) {
            json in = json::parse(std::cin);
            heavytail::StepPath p = heavytail::step_path_from_json(in.at(0));
            heavytail::StepPath q = heavytail::step_path_from_json(in.at(1));
            double d;
            if (metric == "j1")
                d = heavytail::j1_distance(p, q, tol);
            else if (metric == "m1p")
                d = heavytail::m1prime_upper(p, q, density);
            else if (metric == "uniform")
                d = heavytail::uniform_distance(p, q);
            else
                throw std::runtime_error("unknown metric: " + metric);
            std::cout << json{{"metric", metric}, {"distance", d}}.dump() << "\n";
            return 0;
        }
        if (rate->parsed()) {
            json in = json::parse(std::cin);
            heavytail::StepPath p = heavytail::step_path_from_json(in);
            std::cout << rate_record(p).dump() << "\n";
            return 0;
        }
        if (estimate->parsed()) {
            std::string raw = read_file(config_path);
            json config = json::parse(raw);
            fs::create_directories(est_out);
            for (const auto& e : config.at("experiments")) {
                if (e.value("name", std::string()) != experiment_name) continue;
                auto outputs = run_experiment(
                    e, config, est_out,
                    e.value("seed", static_cast<std::uint64_t>(1)));
                for (const auto& f : outputs) std::cout << f << "\n";
                return 0;
            }
            std::cerr << "no experiment named " << experiment_name << "\n";
            return 2;
        }
        if (vlimits->parsed()) {
            json config = config_path.empty()
                              ? json{{"tail", {{"c", 1.0}, {"beta", 0.0}, {"lambda", 1.0}, {"gamma", 2.0}}}}
                              : json::parse(read_file(config_path));
            json e{{"kind", "verify-limits"},
                   {"name", "limits"},
                   {"n_grid", {10000, 1000000, 100000000}}};
            fs::create_directories(vl_out);
            auto outputs = run_experiment(e, config, vl_out, 1);
            for (const auto& f : outputs) std::cout << f << "\n";
            return 0;
        }
        if (cx->parsed()) {
            json config = config_path.empty()
                              ? json{{"tail", {{"c", 1.0}, {"beta", 0.0}, {"lambda", 1.0}, {"gamma", 2.0}}},
                                     {"levy",
                                      {{"tail", {{"c", 1.0}, {"beta", 0.0}, {"lambda", 1.0}, {"gamma", 2.0}}},
                                       {"a", 0.2},
                                       {"small_jump", {{"kappa", 0.5}, {"alpha", 0.5}}}}}}
                              : json::parse(read_file(config_path));
            fs::create_directories(cx_out);
            json e31{{"kind", "lemma31"}, {"name", "lemma31"}, {"n_list", {16, 64, 256}}};
            json e32{{"kind", "lemma32"},
                     {"name", "lemma32"},
                     {"n_grid", {256, 1024, 4096, 16384}}};
            auto o1 = run_experiment(e31, config, cx_out, cx_seed);
            auto o2 = run_experiment(e32, config, cx_out, cx_seed);
            for (const auto& f : o1) std::cout << f << "\n";
            for (const auto& f : o2) std::cout << f << "\n";
            return 0;
        }
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
