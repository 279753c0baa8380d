#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heavytail/serialization.hpp"

namespace fs = std::filesystem;
using heavytail::json;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cmd(const std::string& args, const std::string& stdin_data = "") {
    fs::path in_file = fs::temp_directory_path() / "heavytail_cli_stdin.json";
    fs::path out_file = fs::temp_directory_path() / "heavytail_cli_stdout.txt";
    {
        std::ofstream f(in_file);
        f << stdin_data;
    }
    std::string cmd = std::string(HEAVYTAIL_CLI_PATH) + " " + args + " < " +
                      in_file.string() + " > " + out_file.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream f(out_file);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json base_config() {
    return json{
        {"tail", {{"c", 1.0}, {"beta", 0.0}, {"lambda", 1.0}, {"gamma", 2.0}}},
        {"output_dir", "out"},
    };
}

} // namespace

TEST_CASE("rate subcommand") {
    CmdResult r = run_cmd("rate", R"({"initial":0,"jumps":[[0.2,1],[0.5,1],[0.8,1]]})");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("I_J1") == 3);
    CHECK(j.at("I_M1p") == 3);
    CHECK(j.at("I_rw") == 3);
    // infinite rate serializes as "inf"
    CmdResult r2 = run_cmd("rate", R"({"initial":0.5,"jumps":[]})");
    json j2 = json::parse(r2.out);
    CHECK(j2.at("I_J1") == "inf");
    CHECK(j2.at("I_M1p") == 1);
}

TEST_CASE("distance subcommand") {
    std::string two = R"([{"initial":0,"jumps":[[0.5,1]]},{"initial":0,"jumps":[[0.6,1]]}])";
    CmdResult r = run_cmd("distance --metric j1", two);
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.out).at("distance").get<double>() ==
          doctest::Approx(0.1).epsilon(1e-3));
    CmdResult r2 = run_cmd("distance --metric uniform", two);
    CHECK(json::parse(r2.out).at("distance").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("simulate count contract") {
    CmdResult r = run_cmd("simulate --n 50 --k 3 --trials 2 --seed 9");
    CHECK(r.exit_code == 0);
    int lines = 0;
    std::istringstream ss(r.out);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) {
            json rec = json::parse(line); // every record re-parses
            CHECK(rec.at("n") == 50);
            heavytail::StepPath jh = heavytail::step_path_from_json(rec.at("j_hat"));
            CHECK(jh.jump_count() <= 3);
            ++lines;
        }
    CHECK(lines == 2);
}

TEST_CASE("unknown subcommand exits 2") {
    CmdResult r = run_cmd("definitely-not-a-command");
    CHECK(r.exit_code == 2);
}

TEST_CASE("run produces manifest and deterministic outputs") {
    fs::path dir1 = fs::temp_directory_path() / "heavytail_run1";
    fs::path dir2 = fs::temp_directory_path() / "heavytail_run2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    json config = base_config();
    config["experiments"] = json::array(
        {json{{"kind", "verify-limits"},
              {"name", "limits"},
              {"seed", 5},
              {"n_grid", {10000, 1000000, 100000000}}},
         json{{"kind", "simulate"},
              {"name", "paths"},
              {"seed", 5},
              {"n", 30},
              {"k", 2},
              {"trials", 3}}});
    fs::path cfg_path = fs::temp_directory_path() / "heavytail_cfg.json";
    {
        std::ofstream f(cfg_path);
        f << config.dump(2);
    }
    CmdResult r1 = run_cmd("run --config " + cfg_path.string() + " --out " + dir1.string());
    CHECK(r1.exit_code == 0);
    CmdResult r2 = run_cmd("run --config " + cfg_path.string() + " --out " + dir2.string());
    CHECK(r2.exit_code == 0);

    json manifest = json::parse(read_file(dir1 / "manifest.json"));
    CHECK(manifest.at("experiments").size() == 2);
    CHECK(manifest.at("seeds").at("limits") == 5);
    for (const auto& e : manifest.at("experiments"))
        CHECK(e.at("status") == "ok");
    // nine limit CSVs
    int csvs = 0;
    for (const auto& f : manifest.at("experiments")[0].at("outputs"))
        if (f.get<std::string>().find(".csv") != std::string::npos) ++csvs;
    CHECK(csvs == 9);
    // identical runs give byte-identical artifacts
    for (const auto& e : manifest.at("experiments"))
        for (const auto& f : e.at("outputs")) {
            std::string name = f.get<std::string>();
            CHECK(read_file(dir1 / name) == read_file(dir2 / name));
        }
    // every emitted limits CSV has the documented columns
    std::string csv = read_file(dir1 / "limits_limit3.csv");
    CHECK(csv.find("n,value,target") == 0);

    // empty experiment list: manifest only, exit 0
    fs::path dir3 = fs::temp_directory_path() / "heavytail_run3";
    fs::remove_all(dir3);
    json empty = base_config();
    empty["experiments"] = json::array();
    fs::path cfg2 = fs::temp_directory_path() / "heavytail_cfg_empty.json";
    {
        std::ofstream f(cfg2);
        f << empty.dump();
    }
    CmdResult r3 = run_cmd("run --config " + cfg2.string() + " --out " + dir3.string());
    CHECK(r3.exit_code == 0);
    CHECK(fs::exists(dir3 / "manifest.json"));

    // an experiment error is recorded and the run exits 1 but continues
    json bad = base_config();
    bad["experiments"] = json::array(
        {json{{"kind", "no-such-kind"}, {"name", "broken"}},
         json{{"kind", "simulate"}, {"name", "fine"}, {"n", 20}, {"trials", 1}}});
    fs::path cfg3 = fs::temp_directory_path() / "heavytail_cfg_bad.json";
    {
        std::ofstream f(cfg3);
        f << bad.dump();
    }
    fs::path dir4 = fs::temp_directory_path() / "heavytail_run4";
    fs::remove_all(dir4);
    CmdResult r4 = run_cmd("run --config " + cfg3.string() + " --out " + dir4.string());
    CHECK(r4.exit_code == 1);
    json m4 = json::parse(read_file(dir4 / "manifest.json"));
    CHECK(m4.at("experiments")[0].at("status").get<std::string>().find("error") == 0);
    CHECK(m4.at("experiments")[1].at("status") == "ok");

    // report summarizes without error
    CmdResult rep = run_cmd("report --dir " + dir1.string());
    CHECK(rep.exit_code == 0);
    CHECK(rep.out.find("config hash") != std::string::npos);
}
