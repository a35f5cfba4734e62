#ifndef LIVSIC_CONFIG_HPP
#define LIVSIC_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "livsic/cocycle.hpp"
#include "livsic/dynamics.hpp"
#include "livsic/ring.hpp"

namespace livsic {

using json = nlohmann::ordered_json;

json matrix_to_json(const RingElement& m);
// accepts [[..],[..]] row-major arrays, or a bare number as a scalar
RingElement matrix_from_json(const json& j, const std::string& context);

json point_to_json(const SystemPoint& p);
SystemPoint point_from_json(const json& j, const HyperbolicSystem& sys);

// One run = one config file. Everything a subcommand needs, deterministic
// given the seed; the raw json is echoed verbatim into every report.
struct RunConfig {
    json raw;

    HyperbolicSystem system;
    int ring_dim = 1;
    RingOptions ring_opts;
    std::shared_ptr<GeneratorMap> generator;

    int n_max = 60;
    int period_bound = 12;
    std::int64_t orbit_length = 65536;
    double epsilon = 0.05;
    double delta = 0.0625;
    double obstruction_tol = 1e-8;
    double growth_tol = 0.05;
    std::int64_t returns_min = 1;
    std::int64_t returns_max = 2000;
    int shadow_count = 100;
    int samples = 400;
    double solve_tol = -1.0;  // negative selects the coverage-derived default
    double consistency_obstruction_tol = 1e-4;
    std::int64_t consistency_max_pairs = 400;
    int coverage_grid = 64;
    std::int64_t enumeration_budget = 20'000'000;
    int growth_orbit_samples = 12;

    std::uint64_t seed = 1;
    std::string out_dir = "out";

    static RunConfig parse(const json& j);
    static RunConfig from_file(const std::string& path);

    // apply a dotted-path override ("analysis.n_max=80") to raw json
    static void apply_override(json& raw, const std::string& key_eq_value);
};

}  // namespace livsic

#endif
