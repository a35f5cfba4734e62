#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "livsic/cli.hpp"
#include "livsic/config.hpp"
#include "synthetic.hpp"

using namespace livsic;
using namespace livsic::testing;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "livsic_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const fs::path& dir, const json& cfg) {
    const fs::path path = dir / "config.json";
    std::ofstream out(path);
    out << cfg.dump(2);
    return path.string();
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

json base_config(const json& generator, const json& ring, std::uint64_t seed = 7) {
    json cfg;
    cfg["system"] = {{"type", "sft"}, {"alphabet", 2}, {"adjacency", {{1, 1}, {1, 1}}}};
    cfg["ring"] = ring;
    cfg["generator"] = generator;
    cfg["analysis"] = {{"n_max", 40},       {"period_bound", 8},  {"orbit_length", 2048},
                       {"epsilon", 0.05},   {"delta", 0.0625},    {"returns_max", 400},
                       {"shadow_count", 25}, {"samples", 150}};
    cfg["seed"] = seed;
    return cfg;
}

json identity_generator_json() {
    const json e = {{1.0, 0.0}, {0.0, 1.0}};
    return {{"type", "window"}, {"radius", 0}, {"alpha", 1.0}, {"table", {{"0", e}, {"1", e}}}};
}

json coboundary_generator_json(double scale_factor = 1.0) {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);
    auto t_star = random_exp_window_map(shift, 1, 2, 515);
    json table = json::object();
    for (const auto& [word, value] : coboundary_window_table(shift, *t_star))
        table[word] = matrix_to_json(value.scaled(scale_factor));
    return {{"type", "window"}, {"radius", 2}, {"alpha", 1.0}, {"table", table}};
}

}  // namespace

TEST_CASE("identity cocycle: every subcommand passes") {
    fs::path dir = temp_dir("identity");
    json cfg = base_config(identity_generator_json(), {{"type", "matrix"}, {"dim", 2}});
    cfg["out_dir"] = (dir / "out").string();
    const std::string cfg_path = write_config(dir, cfg);

    for (const std::string sub : {"obstructions", "growth", "shadow", "solve"}) {
        CliRun r = run({sub, "--config", cfg_path, "--out", (dir / sub).string()});
        CAPTURE(sub);
        CAPTURE(r.err);
        CHECK(r.exit_code == 0);
        CHECK(fs::exists(dir / sub / "report.json"));
    }
    CHECK(fs::exists(dir / "growth" / "series.csv"));
    CHECK(fs::exists(dir / "solve" / "transfer.json"));
    CHECK(fs::exists(dir / "solve" / "transfer.csv"));

    json rep = read_json(dir / "obstructions" / "report.json");
    CHECK(rep["results"]["pass"].get<bool>());
    CHECK(rep["results"]["max_deviation"].get<double>() == 0.0);

    CliRun v = run({"verify", "--config", cfg_path, "--out", (dir / "verify").string()});
    CHECK(v.exit_code == 0);
    CHECK(fs::exists(dir / "verify" / "solve" / "report.json"));
}

TEST_CASE("synthetic coboundary passes; scaled version fails obstructions") {
    fs::path dir = temp_dir("coboundary");
    json cfg = base_config(coboundary_generator_json(), {{"type", "matrix"}, {"dim", 2}});
    const std::string cfg_path = write_config(dir, cfg);

    CliRun obs = run({"obstructions", "--config", cfg_path, "--out", (dir / "obs").string()});
    CHECK(obs.exit_code == 0);
    json rep = read_json(dir / "obs" / "report.json");
    CHECK(rep["results"]["max_deviation"].get<double>() <= 1e-8);

    CliRun solve = run({"solve", "--config", cfg_path, "--out", (dir / "solve").string()});
    CAPTURE(solve.out);
    CHECK(solve.exit_code == 0);

    // scaling by e^0.1 trips every fixed point
    json scaled = base_config(coboundary_generator_json(std::exp(0.1)),
                              {{"type", "matrix"}, {"dim", 2}});
    const std::string scaled_path = write_config(temp_dir("scaled"), scaled);
    CliRun bad = run({"obstructions", "--config", scaled_path, "--out", (dir / "bad").string()});
    CHECK(bad.exit_code == 1);
    json bad_rep = read_json(dir / "bad" / "report.json");
    CHECK(bad_rep["results"]["max_deviation"].get<double>() >= std::exp(0.1) - 1.0 - 1e-9);
}

TEST_CASE("constant scalar 2: solve detects the non-coboundary") {
    fs::path dir = temp_dir("const2");
    json gen = {{"type", "window"},
                {"radius", 0},
                {"alpha", 1.0},
                {"table", {{"0", 2.0}, {"1", 2.0}}}};
    json cfg = base_config(gen, {{"type", "scalar"}});
    const std::string cfg_path = write_config(dir, cfg);

    CliRun solve = run({"solve", "--config", cfg_path, "--out", (dir / "solve").string()});
    CHECK(solve.exit_code == 1);
    json rep = read_json(dir / "solve" / "report.json");
    CHECK_FALSE(rep["results"]["pass"].get<bool>());
    CHECK_FALSE(rep["results"]["consistency"]["pass"].get<bool>());
    CHECK(rep["results"]["consistency"]["worst_ratio_log"].get<double>() > std::log(10.0));
}

TEST_CASE("determinism: identical config and seed give identical results") {
    fs::path dir = temp_dir("determinism");
    json cfg = base_config(coboundary_generator_json(), {{"type", "matrix"}, {"dim", 2}}, 99);
    cfg["analysis"]["orbit_length"] = 1024;
    const std::string cfg_path = write_config(dir, cfg);

    CliRun a = run({"solve", "--config", cfg_path, "--out", (dir / "a").string()});
    CliRun b = run({"solve", "--config", cfg_path, "--out", (dir / "b").string()});
    CHECK(a.exit_code == b.exit_code);
    json ra = read_json(dir / "a" / "report.json");
    json rb = read_json(dir / "b" / "report.json");
    CHECK(ra["config"].dump() == rb["config"].dump());
    CHECK(ra["results"].dump() == rb["results"].dump());

    json ta = read_json(dir / "a" / "transfer.json");
    json tb = read_json(dir / "b" / "transfer.json");
    CHECK(ta.dump() == tb.dump());
}

TEST_CASE("usage and config errors exit 2") {
    fs::path dir = temp_dir("errors");

    CHECK(run({"obstructions"}).exit_code == 2);          // missing --config
    CHECK(run({"frobnicate", "--config", "x"}).exit_code == 2);
    CHECK(run({"obstructions", "--config", (dir / "missing.json").string()}).exit_code == 2);

    // malformed json
    {
        std::ofstream bad(dir / "bad.json");
        bad << "{ not json";
    }
    CHECK(run({"obstructions", "--config", (dir / "bad.json").string()}).exit_code == 2);

    // well-formed json, bad content: non-primitive adjacency
    json cfg = base_config(identity_generator_json(), {{"type", "matrix"}, {"dim", 2}});
    cfg["system"]["adjacency"] = {{1, 0}, {0, 1}};
    CliRun r = run({"obstructions", "--config", write_config(dir, cfg)});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("primitive") != std::string::npos);
}

TEST_CASE("growth subcommand mirrors the library on the 2/3 cocycle") {
    fs::path dir = temp_dir("growth23");
    json gen = {{"type", "window"},
                {"radius", 0},
                {"alpha", 1.0},
                {"table", {{"0", 2.0}, {"1", 3.0}}}};
    json cfg = base_config(gen, {{"type", "scalar"}});
    const std::string cfg_path = write_config(dir, cfg);

    CliRun r = run({"growth", "--config", cfg_path, "--out", (dir / "out").string()});
    CHECK(r.exit_code == 0);
    json rep = read_json(dir / "out" / "report.json");
    CHECK(rep["results"]["inequality"]["pass"].get<bool>());
    CHECK(rep["results"]["growth"]["r_hat"].get<double>() ==
          doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK(rep["results"]["spectrum"]["sup_rp"].get<double>() ==
          doctest::Approx(std::log(3.0)).epsilon(1e-9));

    // csv series has one row per n plus the header
    std::ifstream csv(dir / "out" / "series.csv");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 41);
}

TEST_CASE("shadow subcommand on the cat map") {
    fs::path dir = temp_dir("shadow_cat");
    json cfg;
    cfg["system"] = {{"type", "toral"}, {"matrix", {{2, 1}, {1, 1}}}, {"precision_bits", 128}};
    cfg["ring"] = {{"type", "matrix"}, {"dim", 2}};
    cfg["generator"] = {{"type", "expr"}, {"alpha", 1.0}, {"formula", "e"}};
    cfg["analysis"] = {{"shadow_count", 40}, {"returns_max", 60}, {"delta", 0.125}};
    cfg["seed"] = 3;
    const std::string cfg_path = write_config(dir, cfg);

    CliRun r = run({"shadow", "--config", cfg_path, "--out", (dir / "out").string()});
    CAPTURE(r.err);
    CHECK(r.exit_code == 0);
    json rep = read_json(dir / "out" / "report.json");
    CHECK(rep["results"]["violations"].get<int>() == 0);
    CHECK(rep["results"]["collected"].get<int>() == 40);
    // fitted expansion constant agrees with ln of the unstable eigenvalue
    const double lambda_fit = rep["results"]["lambda_fit"].get<double>();
    const double lambda = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(lambda_fit == doctest::Approx(lambda).epsilon(0.2));
}

TEST_CASE("point serialization round-trips") {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);
    HyperbolicSystem cat = HyperbolicSystem::toral({{{2, 1}, {1, 1}}});
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        SystemPoint s = shift.random_point(rng);
        CHECK(point_equal(point_from_json(point_to_json(s), shift), s));
        SystemPoint t = cat.random_point(rng);
        CHECK(point_equal(point_from_json(point_to_json(t), cat), t));
    }
    // periodic toral points carry non-dyadic denominators exactly
    for (const auto& p : cat.periodic_points(2))
        CHECK(point_equal(point_from_json(point_to_json(p), cat), p));
}

TEST_CASE("overrides reach the echoed config and the run") {
    fs::path dir = temp_dir("override");
    json cfg = base_config(identity_generator_json(), {{"type", "matrix"}, {"dim", 2}});
    const std::string cfg_path = write_config(dir, cfg);

    CliRun r = run({"obstructions", "--config", cfg_path, "--out", (dir / "out").string(),
                    "--override", "analysis.period_bound=4", "--seed", "123"});
    CHECK(r.exit_code == 0);
    json rep = read_json(dir / "out" / "report.json");
    CHECK(rep["config"]["analysis"]["period_bound"].get<int>() == 4);
    CHECK(rep["config"]["seed"].get<std::uint64_t>() == 123);
    CHECK(rep["results"]["period_reached"].get<int>() == 4);
}
