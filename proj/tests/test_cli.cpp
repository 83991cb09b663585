#include "doctest.h"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "logwave_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Runs the installed CLI with stdout+stderr captured; returns the exit code.
int run(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(LOGWAVE_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    const int st = std::system(cmd.c_str());
    REQUIRE(st != -1);
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json jload(const fs::path& p) {
    std::ifstream f(p);
    return json::parse(f);
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p);
    f << content;
}

std::string one_wave_params(double a, double b, double ys, double d) {
    json j = {{"c", 0.0},
              {"d", d},
              {"waves", json::array({{{"id", "1"},
                                      {"a", a},
                                      {"b", b},
                                      {"y_sat", ys},
                                      {"edge", false}}})}};
    return j.dump(2);
}

} // namespace

TEST_CASE("cli: help, version, and parse failures") {
    auto dir = fresh_dir("basic");
    auto log = dir / "log.txt";
    CHECK(run("--help", log) == 0);
    const std::string help = slurp(log);
    CHECK(help.find("decompose") != std::string::npos);
    CHECK(help.find("scalogram") != std::string::npos);
    CHECK(run("--version", log) == 0);
    CHECK(slurp(log).find("1.0.0") != std::string::npos);
    CHECK(run("", log) == 3);          // a subcommand is required
    CHECK(run("frobnicate", log) == 3); // unknown subcommand
    CHECK(run("decompose", log) == 3);  // missing required input
}

TEST_CASE("cli: synthesize writes a deterministic series") {
    auto dir = fresh_dir("synth");
    auto log = dir / "log.txt";
    auto params = dir / "params.json";
    write_file(params, one_wave_params(5.0, 100.0, 1000.0, 2.0));

    auto out1 = dir / "run1";
    auto out2 = dir / "run2";
    const std::string flags = " --length 200 --noise-sigma 50 --seed 7";
    CHECK(run("synthesize " + params.string() + flags + " --out " + out1.string(),
              log) == 0);
    CHECK(run("synthesize " + params.string() + flags + " --out " + out2.string(),
              log) == 0);
    const std::string s1 = slurp(out1 / "series.csv");
    CHECK(!s1.empty());
    CHECK(s1 == slurp(out2 / "series.csv")); // same seed, same bytes

    auto out3 = dir / "run3";
    CHECK(run("synthesize " + params.string() +
                  " --length 200 --noise-sigma 50 --seed 8 --out " + out3.string(),
              log) == 0);
    CHECK(s1 != slurp(out3 / "series.csv"));

    const json man = jload(out1 / "manifest.json");
    CHECK(man["command"] == "synthesize");
    CHECK(man["length"] == 200);
    CHECK(man["seed"] == 7);

    // drift-only model: every sample sits at the drift rate
    auto flat = dir / "flat";
    auto fparams = dir / "flat.json";
    write_file(fparams, R"({"c": 0.0, "d": 13.9, "waves": []})");
    CHECK(run("synthesize " + fparams.string() + " --length 10 --out " +
                  flat.string(),
              log) == 0);
    std::ifstream f(flat / "series.csv");
    std::string line;
    std::getline(f, line);
    CHECK(line == "t,value");
    std::size_t rows = 0;
    while (std::getline(f, line)) {
        ++rows;
        CHECK(line.substr(line.find(',') + 1) == "13.9");
    }
    CHECK(rows == 10);

    CHECK(run("synthesize " + (dir / "absent.json").string() + " --out " +
                  dir.string(),
              log) == 2);
}

TEST_CASE("cli: scalogram grid, extrema, and failure modes") {
    auto dir = fresh_dir("scal");
    auto log = dir / "log.txt";
    auto params = dir / "params.json";
    write_file(params, one_wave_params(5.0, 100.0, 1000.0, 0.0));
    auto series_dir = dir / "series";
    CHECK(run("synthesize " + params.string() + " --length 200 --out " +
                  series_dir.string(),
              log) == 0);
    const std::string input = (series_dir / "series.csv").string();

    auto out = dir / "grid";
    CHECK(run("scalogram " + input + " --out " + out.string(), log) == 0);
    CHECK(fs::file_size(out / "scalogram.csv") > 0);
    const json man = jload(out / "manifest.json");
    CHECK(man["command"] == "scalogram");
    CHECK(man["grid_rows"] == 59);  // alpha 1..30 step 0.5
    CHECK(man["grid_cols"] == 199); // one fewer than the series after differencing
    const json ext = jload(out / "extrema.json");
    REQUIRE(!ext.empty());
    CHECK(std::fabs(double(ext[0]["alpha"]) - 5.0) <= 0.5);
    CHECK(std::fabs(double(ext[0]["beta"]) - 100.0) <= 1.5);
    CHECK(double(ext[0]["y_sat"]) == doctest::Approx(1000.0).epsilon(0.02));

    CHECK(run("scalogram " + (dir / "absent.csv").string() + " --out " +
                  out.string(),
              log) == 2);
    CHECK(run("scalogram " + input + " --alpha-step 0 --out " + out.string(),
              log) == 3);
    CHECK(run("scalogram " + input + " --alpha-min -2 --out " + out.string(),
              log) == 3);
}

TEST_CASE("cli: decompose recovers a clean wave and is idempotent") {
    auto dir = fresh_dir("dec");
    auto log = dir / "log.txt";
    auto params = dir / "params.json";
    write_file(params, one_wave_params(6.0, 80.0, 1500.0, 2.0));
    auto series_dir = dir / "series";
    CHECK(run("synthesize " + params.string() + " --length 160 --out " +
                  series_dir.string(),
              log) == 0);
    const std::string input = (series_dir / "series.csv").string();

    const std::string flags = " --max-waves 4 --stop-r2 0.9999"
                              " --detail-alpha-max 20 --carrier-alpha-max 60";
    auto out1 = dir / "run1";
    auto out2 = dir / "run2";
    CHECK(run("decompose " + input + flags + " --out " + out1.string(), log) == 0);
    CHECK(run("decompose " + input + flags + " --out " + out2.string(), log) == 0);

    const json waves = jload(out1 / "waves.json");
    REQUIRE(!waves["waves"].empty());
    bool found = false;
    for (const json& w : waves["waves"]) {
        if (std::fabs(double(w["b"]) - 80.0) <= 2.0 &&
            std::fabs(double(w["a"]) - 6.0) <= 1.0)
            found = true;
    }
    CHECK(found);
    CHECK(double(waves["d"]) == doctest::Approx(2.0).epsilon(0.05));

    const json fit = jload(out1 / "fit.json");
    CHECK(double(fit["r_squared"]) > 0.999);
    CHECK(fit["residuals"].size() == 160);

    const json man = jload(out1 / "manifest.json");
    CHECK(man["command"] == "decompose");
    CHECK(man["r_squared"] == fit["r_squared"]);
    CHECK(man["wave_count"] == waves["waves"].size());
    CHECK(fs::file_size(out1 / "waves.csv") > 0);

    CHECK(slurp(out1 / "waves.json") == slurp(out2 / "waves.json"));
    CHECK(slurp(out1 / "manifest.json") == slurp(out2 / "manifest.json"));

    CHECK(run("decompose " + input + " --max-waves 0 --out " + out1.string(),
              log) == 3);
    CHECK(run("decompose " + (dir / "absent.csv").string() + " --out " +
                  out1.string(),
              log) == 2);
}

TEST_CASE("cli: trend groups the bundled reference table") {
    auto dir = fresh_dir("trend");
    auto log = dir / "log.txt";
    const std::string table = std::string(LOGWAVE_DATA_DIR) + "/reference_waves.json";
    auto out = dir / "run";
    CHECK(run("trend " + table + " --out " + out.string(), log) == 0);
    const json chains = jload(out / "chains.json");
    REQUIRE(chains.size() == 4);
    std::vector<std::string> first = chains[0]["member_ids"];
    CHECK(first == std::vector<std::string>{"11", "12", "13"});
    const json man = jload(out / "manifest.json");
    CHECK(man["chain_count"] == 4);
    CHECK(run("trend " + table + " --group-tol -0.5 --out " + out.string(),
              log) == 3);
}

TEST_CASE("cli: entropy prints the requested measure") {
    auto dir = fresh_dir("entropy");
    auto log = dir / "log.txt";
    auto dist = dir / "dist.json";
    write_file(dist, R"([{"outcome":[0],"p":0.5},
                         {"outcome":[1],"p":0.25},
                         {"outcome":[2],"p":0.25}])");
    CHECK(run("entropy " + dist.string() + " --measure H --out " + dir.string(),
              log) == 0);
    CHECK(slurp(log) == "1.5\n");
    const json man = jload(dir / "manifest.json");
    CHECK(man["value"] == 1.5);

    auto pair_csv = dir / "pair.csv";
    write_file(pair_csv, "x1,x2,p\n0,0,0.375\n0,1,0.125\n1,0,0.125\n1,1,0.375\n");
    CHECK(run("entropy " + pair_csv.string() + " --measure T2 --out " +
                  dir.string(),
              log) == 0);
    CHECK(slurp(log).substr(0, 6) == "0.1887");

    CHECK(run("entropy " + pair_csv.string() + " --measure T3 --out " +
                  dir.string(),
              log) == 3); // arity mismatch
    CHECK(run("entropy " + pair_csv.string() + " --measure Q --out " +
                  dir.string(),
              log) == 3);
    CHECK(run("entropy " + (dir / "absent.json").string() + " --measure H --out " +
                  dir.string(),
              log) == 2);
}

TEST_CASE("cli: kdv-check reports second-order convergence") {
    auto dir = fresh_dir("kdv");
    auto log = dir / "log.txt";
    CHECK(run("kdv-check --out " + dir.string(), log) == 0);
    const std::string text = slurp(log);
    CHECK(text.find("ratio") != std::string::npos);
    const json man = jload(dir / "manifest.json");
    const double ratio = man["ratio"];
    CHECK(ratio > 3.3);
    CHECK(ratio < 4.8);
    CHECK(double(man["observed_order"]) == doctest::Approx(2.0).epsilon(0.2));
    CHECK(run("kdv-check --k 0 --out " + dir.string(), log) == 3);
    CHECK(run("kdv-check --h -1 --out " + dir.string(), log) == 3);
}

TEST_CASE("cli: json config supplies flags, command line wins") {
    auto dir = fresh_dir("config");
    auto log = dir / "log.txt";
    auto outA = dir / "a";
    auto outB = dir / "b";
    auto cfg = dir / "cfg.json";
    json j = {{"out", outA.string()},
              {"kdv-check", {{"h", 0.1}, {"tau", 0.01}}}};
    write_file(cfg, j.dump(2));

    CHECK(run("--config " + cfg.string() + " kdv-check", log) == 0);
    json man = jload(outA / "manifest.json");
    CHECK(man["h"] == 0.1);
    CHECK(man["tau"] == 0.01);

    CHECK(run("--config " + cfg.string() + " --out " + outB.string() +
                  " kdv-check --h 0.2",
              log) == 0);
    man = jload(outB / "manifest.json");
    CHECK(man["h"] == 0.2);   // command line beats the config file
    CHECK(man["tau"] == 0.01); // untouched flags still come from the config
}
