#include "doctest.h"

#include "common.hpp"
#include "timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace logwave;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
    fs::path p = fs::temp_directory_path() / "logwave_ts_tests";
    fs::create_directories(p);
    return p;
}

std::string write_file(const std::string& name, const std::string& body) {
    fs::path p = tmpdir() / name;
    std::ofstream out(p);
    out << body;
    return p.string();
}

} // namespace

TEST_CASE("ingest_csv picks the second column by default") {
    auto path = write_file("basic.csv", "date,close\n1982-07,109\n1982-08,111.5\n1982-09,120\n");
    TimeSeries s = ingest_csv(path, "");
    REQUIRE(s.size() == 3);
    CHECK(s.values[0] == 109.0);
    CHECK(s.values[1] == 111.5);
    CHECK(s.values[2] == 120.0);
    CHECK(s.start_label == "1982-07");
}

TEST_CASE("ingest_csv selects a column by header name") {
    auto path = write_file("named.csv",
                           "date,open,close\n2000-01,5,7\n2000-02,6,8\n");
    TimeSeries s = ingest_csv(path, "close");
    REQUIRE(s.size() == 2);
    CHECK(s.values[0] == 7.0);
    CHECK(s.values[1] == 8.0);
    TimeSeries o = ingest_csv(path, "open");
    CHECK(o.values[1] == 6.0);
}

TEST_CASE("ingest_csv selects a column by 0-based index") {
    auto path = write_file("indexed.csv",
                           "date,open,close\n2000-01,5,7\n2000-02,6,8\n");
    TimeSeries s = ingest_csv(path, "2");
    CHECK(s.values[0] == 7.0);
    TimeSeries t = ingest_csv(path, "1");
    CHECK(t.values[0] == 5.0);
}

TEST_CASE("ingest_csv single-column file uses the first column") {
    auto path = write_file("mono.csv", "value\n3\n4\n5\n");
    TimeSeries s = ingest_csv(path, "");
    REQUIRE(s.size() == 3);
    CHECK(s.values[2] == 5.0);
}

TEST_CASE("ingest_csv failure modes name the problem") {
    CHECK_THROWS_AS(ingest_csv((tmpdir() / "nope.csv").string(), ""), InputError);

    auto bad = write_file("badcell.csv", "t,v\n1,10\n2,oops\n3,30\n");
    try {
        ingest_csv(bad, "");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }

    auto missing = write_file("missingcol.csv", "t,v\n1,10\n2,20\n");
    CHECK_THROWS_AS(ingest_csv(missing, "volume"), InputError);
    CHECK_THROWS_AS(ingest_csv(missing, "7"), InputError);

    auto empty = write_file("empty.csv", "");
    CHECK_THROWS_AS(ingest_csv(empty, ""), InputError);

    auto headeronly = write_file("headeronly.csv", "t,v\n");
    CHECK_THROWS_AS(ingest_csv(headeronly, ""), InputError);

    auto one = write_file("onerow.csv", "t,v\n1,10\n");
    CHECK_THROWS_AS(ingest_csv(one, ""), InputError);
}

TEST_CASE("save_csv round-trips bit-exactly") {
    TimeSeries s;
    s.start_label = "1982-07";
    s.values = {1.0, 1.0 / 3.0, 2.5e-17, -123456.789, 0.1 + 0.2};
    auto path = (tmpdir() / "roundtrip.csv").string();
    save_csv(s, path);
    TimeSeries back = ingest_csv(path, "");
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(back.values[i] == s.values[i]);
}

TEST_CASE("first_difference and cumulative") {
    TimeSeries s;
    s.start_label = "x";
    s.values = {1.0, 4.0, 9.0, 16.0};
    TimeSeries d = first_difference(s);
    REQUIRE(d.size() == 3);
    CHECK(d.values[0] == 3.0);
    CHECK(d.values[1] == 5.0);
    CHECK(d.values[2] == 7.0);

    TimeSeries c = cumulative(d);
    REQUIRE(c.size() == 3);
    CHECK(c.values[0] == 3.0);
    CHECK(c.values[2] == 15.0); // s.values[3] - s.values[0]

    TimeSeries tiny;
    tiny.values = {1.0};
    CHECK_THROWS_AS(first_difference(tiny), ParamError);
}

TEST_CASE("fit_metrics on a hand-computed case") {
    TimeSeries obs, pred;
    obs.values = {1.0, 2.0, 3.0, 4.0};
    pred.values = {1.1, 1.9, 3.2, 3.8};
    FitReport f = fit_metrics(obs, pred);
    CHECK(f.r_squared == doctest::Approx(0.98).epsilon(1e-12));
    CHECK(f.rmse == doctest::Approx(std::sqrt(0.025)).epsilon(1e-12));
    REQUIRE(f.residuals.size() == 4);
    CHECK(f.residuals[0] == doctest::Approx(-0.1));
    CHECK(f.residuals[3] == doctest::Approx(0.2));
}

TEST_CASE("fit_metrics perfect fit and failure modes") {
    TimeSeries obs, pred;
    obs.values = {1.0, 2.0, 3.0};
    pred.values = {1.0, 2.0, 3.0};
    FitReport f = fit_metrics(obs, pred);
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.rmse == 0.0);

    TimeSeries shorter;
    shorter.values = {1.0, 2.0};
    CHECK_THROWS_AS(fit_metrics(obs, shorter), ParamError);

    TimeSeries flat;
    flat.values = {5.0, 5.0, 5.0};
    CHECK_THROWS_AS(fit_metrics(flat, pred), ParamError);
}
