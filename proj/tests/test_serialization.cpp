#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "heavytail/serialization.hpp"

using namespace heavytail;

TEST_CASE("tail params round trip") {
    TailParams p(0.7, -0.25, 1.5, 2.5);
    json j = to_json(p);
    TailParams q = tail_params_from_json(j);
    CHECK(q.c == p.c);
    CHECK(q.beta == p.beta);
    CHECK(q.lambda == p.lambda);
    CHECK(q.gamma == p.gamma);
    // flat schema with the four canonical keys
    CHECK(j.at("c") == 0.7);
    CHECK(j.at("beta") == -0.25);
    CHECK(j.at("lambda") == 1.5);
    CHECK(j.at("gamma") == 2.5);
    // invalid parameters are rejected on re-parse
    j["gamma"] = 0.5;
    CHECK_THROWS_AS(tail_params_from_json(j), std::invalid_argument);
}

TEST_CASE("levy config round trip") {
    LevyConfig cfg(TailParams(1.0, 0.0, 1.0, 2.0));
    cfg.a = 0.3;
    cfg.small_jump = SmallJumpSpec(0.5, 0.5);
    LevyConfig back = levy_config_from_json(to_json(cfg));
    CHECK(back.a == 0.3);
    REQUIRE(back.small_jump.has_value());
    CHECK(back.small_jump->kappa == 0.5);
    LevyConfig plain(TailParams(1.0, 0.0, 1.0, 2.0));
    CHECK(!levy_config_from_json(to_json(plain)).small_jump.has_value());
}

TEST_CASE("step path round trip") {
    StepPath p(0.5, {{0.25, 1.0}, {0.75, -0.5}});
    StepPath q = step_path_from_json(to_json(p));
    CHECK(q.initial() == p.initial());
    REQUIRE(q.jump_count() == p.jump_count());
    for (int i = 0; i < p.jump_count(); ++i) {
        CHECK(q.jumps()[i].time == p.jumps()[i].time);
        CHECK(q.jumps()[i].size == p.jumps()[i].size);
    }
    // schema check
    json j = to_json(p);
    CHECK(j.at("initial") == 0.5);
    CHECK(j.at("jumps").size() == 2);
}

TEST_CASE("csv exports") {
    LimitCheckReport rep;
    rep.limit_id = LimitId::limit3;
    rep.n_grid = {10, 100};
    rep.values = {-0.5, -0.75};
    rep.target = -1.0;
    rep.max_abs_error_at_largest_n = 0.25;
    std::string csv = limit_report_csv(rep);
    CHECK(csv.find("n,value,target") == 0);
    CHECK(csv.find("10,-0.5,-1") != std::string::npos);

    StepPath p = StepPath::indicator(1.0, 0.5);
    std::string pcsv = path_csv(p, 4);
    CHECK(pcsv.find("t,value") == 0);
    CHECK(pcsv.find("0.5,1") != std::string::npos);
}

TEST_CASE("atomic write and hash") {
    std::string path = "/tmp/heavytail_test_atomic.txt";
    write_file_atomic(path, "hello");
    std::ifstream in(path);
    std::string content;
    in >> content;
    CHECK(content == "hello");
    std::remove(path.c_str());

    CHECK(content_hash("abc") != content_hash("abd"));
    CHECK(content_hash("abc") == content_hash("abc"));
    CHECK(content_hash("").size() == 16);
}
