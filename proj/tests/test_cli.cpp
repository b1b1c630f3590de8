#include "doctest.h"
#include "phigamma/cli.hpp"

using namespace phigamma;

TEST_CASE("default configuration") {
    RunConfig c;
    CHECK(c.p == 3);
    CHECK(c.N == 12);
    CHECK(c.D == 60);
    CHECK(c.G == 4);
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("invalid configurations are rejected") {
    RunConfig c;
    c.p = 4;
    CHECK_THROWS(validate(c));
    c = RunConfig{};
    c.p = 2;
    CHECK_THROWS(validate(c));
    c = RunConfig{};
    c.G = 12;
    CHECK_THROWS(validate(c));
    c = RunConfig{};
    c.witt_length = 5;
    CHECK_THROWS(validate(c));
    c = RunConfig{};
    c.D = 2;
    CHECK_THROWS(validate(c));
    c = RunConfig{};
    c.p = 101;
    c.N = 12;
    CHECK_THROWS(validate(c));
}

TEST_CASE("json config overrides and round trip") {
    nlohmann::json j = {{"p", 5}, {"N", 10}, {"jobs", {{{"command", "slopes"}, {"params", {{"diag", {1, 5}}}}}}}};
    RunConfig c = config_from_json(j);
    CHECK(c.p == 5);
    CHECK(c.N == 10);
    CHECK(c.D == 60);
    REQUIRE(c.jobs.size() == 1);
    RunConfig d = config_from_json(c.to_json());
    CHECK(d.to_json() == c.to_json());
}

TEST_CASE("job exit codes") {
    RunConfig c;
    c.D = 30;
    CHECK(run_job(c, {"slopes", {{"diag", {1, 3}}}}).exit == kExitOk);
    CHECK(run_job(c, {"no-such-job", nlohmann::json::object()}).exit == kExitPrecondition);
    CHECK(run_job(c, {"cohomology", {{"twist", 0}}}).exit == kExitOk);
    c.D = 4;
    CHECK(run_job(c, {"cohomology", {{"twist", 0}}}).exit == kExitNotConverged);
}

TEST_CASE("reports are deterministic without timing") {
    RunConfig c;
    c.D = 30;
    c.jobs = {{"witt-demo", nlohmann::json::object()}, {"theta-check", {{"samples", 2}}}};
    CHECK(run_all(c).report.dump() == run_all(c).report.dump());
    c.timing = true;
    CHECK(run_all(c).report["jobs"][0].contains("wall_clock_s"));
}
