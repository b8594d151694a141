#include <doctest.h>

#include "padicjac/runner.hpp"

using namespace padicjac;

namespace {

const char* kTate5 = R"({"prime":5,"precision":24,"generators":[[["5","0"],["0","1"]]]})";
const char* kG2 = R"({"prime":5,"precision":24,"generators":[
  [["25","0"],["0","1"]],
  [["13","12"],["12","13"]]
]})";

} // namespace

TEST_CASE("config parsing accepts the tate curve") {
    JobConfig c = parse_config_text(kTate5);
    CHECK(c.prime == 5);
    CHECK(c.precision == 24);
    CHECK(c.generators.size() == 1);
    CHECK(c.depth == 3);
    CHECK(c.trunc == 16);
}

TEST_CASE("config schema errors carry field paths") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"prime":2,"precision":24,"generators":[]})"),
                         doctest::Contains("EvenPrime"), math_error);
    CHECK_THROWS_WITH_AS(
        parse_config_text(R"({"prime":5,"precision":24,"generators":[[["1","0"],["0","0"]]]})"),
        doctest::Contains("SingularGenerator"), math_error);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"prime":5,"generators":[]})"),
                         doctest::Contains("precision"), math_error);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"prime":5,"precision":4,"generators":[]})"),
                         doctest::Contains("precision"), math_error);
    CHECK_THROWS_WITH_AS(
        parse_config_text(
            R"({"prime":5,"precision":24,"generators":[[["5","0"],["0","1"]]],"bogus":1})"),
        doctest::Contains("bogus"), math_error);
    CHECK_THROWS_AS(parse_config_text("not json"), math_error);
}

TEST_CASE("point parsing forms") {
    JobConfig c = parse_config_text(kTate5);
    ProjPoint a = parse_point(c.prime, 24, "3/4");
    CHECK(a.value().eq(Padic::from_rational(5, BigRat(3, 4), 24)));
    CHECK(parse_point(c.prime, 24, "inf").is_infinity());
    ProjPoint b = parse_point(c.prime, 24, "[6:2]");
    CHECK(b.value().eq(Padic::from_integer(5, 3, 24)));
    CHECK(parse_point(c.prime, 24, "[1:0]").is_infinity());
    CHECK_THROWS_AS(parse_point(c.prime, 24, "[0:0]"), math_error);
}

TEST_CASE("runner: periods on the tate curve") {
    JobConfig cfg = parse_config_text(kTate5);
    RunOptions opt;
    opt.trunc = 24;
    Json out = run_command("periods", cfg, opt);
    CHECK(out["gram"][0][0] == 1);
    CHECK(out["Q"][0][0]["v"] == 1);
    CHECK(out["Q"][0][0]["unit"] == "1");
    CHECK(out["digits"].get<long>() >= 20);
}

TEST_CASE("runner: graph on tate(25)") {
    JobConfig cfg = parse_config_text(
        R"({"prime":5,"precision":24,"generators":[[["25","0"],["0","1"]]],"depth":2})");
    RunOptions opt;
    Json out = run_command("graph", cfg, opt);
    CHECK(out["vertices"] == 1);
    CHECK(out["betti"] == 1);
    CHECK(out["edges"].size() == 1);
    CHECK(out["edges"][0][2] == 2);
}

TEST_CASE("runner: aj at the base point is the identity") {
    JobConfig cfg = parse_config_text(kTate5);
    RunOptions opt;
    opt.trunc = 20;
    opt.point = "2";
    opt.base = "2";
    Json out = run_command("aj", cfg, opt);
    CHECK(out["aj"][0]["v"] == 0);
    CHECK(out["aj"][0]["unit"] == "1");
    CHECK(out["shift"][0] == 0);
}

TEST_CASE("runner: integrate cross-checks valuations") {
    JobConfig cfg = parse_config_text(kG2);
    RunOptions opt;
    opt.trunc = 9;
    opt.depth = 3;
    opt.divisor = "7:1;3:-1";
    opt.measure = "1";
    Json out = run_command("integrate", cfg, opt);
    CHECK(out.contains("value"));
    CHECK(out.contains("valuation"));
}

TEST_CASE("runner output is deterministic") {
    JobConfig cfg = parse_config_text(kTate5);
    RunOptions opt;
    opt.trunc = 20;
    Json a = run_command("periods", cfg, opt);
    Json b = run_command("periods", cfg, opt);
    CHECK(a.dump() == b.dump());
}

TEST_CASE("runner rejects unknown commands") {
    JobConfig cfg = parse_config_text(kTate5);
    CHECK_THROWS_AS(run_command("frobnicate", cfg, RunOptions{}), usage_error);
}
