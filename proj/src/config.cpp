#include "livsic/config.hpp"

#include <fstream>

namespace livsic {

json matrix_to_json(const RingElement& m) {
    json rows = json::array();
    for (int r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.dim(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

RingElement matrix_from_json(const json& j, const std::string& context) {
    if (j.is_number()) return RingElement::scalar(j.get<double>());
    if (!j.is_array() || j.empty())
        throw ConfigError(context + ": expected a matrix (array of rows) or a number");
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw ConfigError(context + ": matrix rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number()) throw ConfigError(context + ": matrix entries must be numbers");
            r.push_back(v.get<double>());
        }
        rows.push_back(std::move(r));
    }
    try {
        return RingElement::from_rows(rows);
    } catch (const DimensionError& e) {
        throw ConfigError(context + ": " + e.what());
    }
}

json point_to_json(const SystemPoint& p) {
    json j;
    if (std::holds_alternative<SymbolPoint>(p)) {
        const SymbolPoint& s = std::get<SymbolPoint>(p);
        j["kind"] = "sft";
        j["left"] = json(s.left());
        j["core"] = json(s.core());
        j["right"] = json(s.right());
        j["core_start"] = s.core_start();
    } else {
        const TorusPoint& t = std::get<TorusPoint>(p);
        j["kind"] = "toral";
        j["num_x"] = t.num_x().to_decimal();
        j["num_y"] = t.num_y().to_decimal();
        j["den"] = t.den().to_decimal();
        j["x"] = t.xd();
        j["y"] = t.yd();
    }
    return j;
}

SystemPoint point_from_json(const json& j, const HyperbolicSystem& sys) {
    const std::string kind = j.value("kind", "");
    if (kind == "sft") {
        auto word = [&](const char* key) {
            Word w;
            for (const auto& v : j.at(key)) w.push_back(v.get<std::uint8_t>());
            return w;
        };
        SymbolPoint p = SymbolPoint::from_parts(word("left"), word("core"), word("right"),
                                               j.at("core_start").get<std::int64_t>());
        if (!sys.valid_point(p)) throw ConfigError("point is not admissible for the system");
        return p;
    }
    if (kind == "toral") {
        return TorusPoint::from_fraction(U256::from_decimal(j.at("num_x").get<std::string>()),
                                         U256::from_decimal(j.at("num_y").get<std::string>()),
                                         U256::from_decimal(j.at("den").get<std::string>()));
    }
    throw ConfigError("point kind must be \"sft\" or \"toral\"");
}

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing config field: " + path + "." + key);
    return *it;
}

HyperbolicSystem parse_system(const json& j) {
    const std::string type = require(j, "type", "system").get<std::string>();
    if (type == "sft") {
        const int alphabet = require(j, "alphabet", "system").get<int>();
        std::vector<std::vector<int>> adj;
        for (const auto& row : require(j, "adjacency", "system")) {
            std::vector<int> r;
            for (const auto& v : row) r.push_back(v.get<int>());
            adj.push_back(std::move(r));
        }
        return HyperbolicSystem::sft(alphabet, std::move(adj));
    }
    if (type == "toral") {
        const auto& m = require(j, "matrix", "system");
        if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
            throw ConfigError("system.matrix must be a 2x2 integer matrix");
        std::array<std::array<std::int64_t, 2>, 2> A{
            {{m[0][0].get<std::int64_t>(), m[0][1].get<std::int64_t>()},
             {m[1][0].get<std::int64_t>(), m[1][1].get<std::int64_t>()}}};
        const unsigned bits = j.value("precision_bits", 128u);
        return HyperbolicSystem::toral(A, bits);
    }
    throw ConfigError("system.type must be \"sft\" or \"toral\"");
}

}  // namespace

RunConfig RunConfig::parse(const json& j) {
    RunConfig cfg;
    cfg.raw = j;

    cfg.system = parse_system(require(j, "system", "config"));
    if (j.contains("closing")) {
        const json& c = j["closing"];
        ClosingConstants cc = cfg.system.closing();
        cc.delta0 = c.value("delta0", cc.delta0);
        cc.lambda = c.value("lambda", cc.lambda);
        cc.C = c.value("C", cc.C);
        cfg.system.override_closing(cc);
    }

    const json& ring = require(j, "ring", "config");
    const std::string rtype = require(ring, "type", "ring").get<std::string>();
    if (rtype == "scalar") cfg.ring_dim = 1;
    else if (rtype == "matrix") cfg.ring_dim = require(ring, "dim", "ring").get<int>();
    else throw ConfigError("ring.type must be \"scalar\" or \"matrix\"");
    if (cfg.ring_dim < 1) throw ConfigError("ring.dim must be >= 1");
    cfg.ring_opts.pivot_rel = ring.value("pivot_rel", cfg.ring_opts.pivot_rel);
    cfg.ring_opts.inverse_check_rel =
        ring.value("inverse_check_rel", cfg.ring_opts.inverse_check_rel);

    const json& gen = require(j, "generator", "config");
    const std::string gtype = require(gen, "type", "generator").get<std::string>();
    const double alpha = gen.value("alpha", 1.0);
    if (gtype == "window") {
        if (!cfg.system.is_sft())
            throw ConfigError("window generators require an SFT system");
        const int radius = require(gen, "radius", "generator").get<int>();
        std::unordered_map<std::string, RingElement> table;
        for (const auto& [word, value] : require(gen, "table", "generator").items()) {
            RingElement m = matrix_from_json(value, "generator.table[\"" + word + "\"]");
            if (m.dim() != cfg.ring_dim)
                throw ConfigError("generator.table[\"" + word + "\"] has dimension " +
                                  std::to_string(m.dim()) + ", ring has " +
                                  std::to_string(cfg.ring_dim));
            table.emplace(word, std::move(m));
        }
        cfg.generator = std::make_shared<WindowGenerator>(radius, std::move(table), alpha);
    } else if (gtype == "expr") {
        if (!cfg.system.is_toral())
            throw ConfigError("expr generators require a toral system");
        std::unordered_map<std::string, RingElement> constants;
        if (gen.contains("constants"))
            for (const auto& [name, value] : gen["constants"].items())
                constants.emplace(name, matrix_from_json(value, "generator.constants." + name));
        cfg.generator = std::make_shared<ExprGenerator>(
            require(gen, "formula", "generator").get<std::string>(), std::move(constants),
            cfg.ring_dim, alpha);
    } else {
        throw ConfigError("generator.type must be \"window\" or \"expr\"");
    }

    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        cfg.n_max = a.value("n_max", cfg.n_max);
        cfg.period_bound = a.value("period_bound", cfg.period_bound);
        cfg.orbit_length = a.value("orbit_length", cfg.orbit_length);
        cfg.epsilon = a.value("epsilon", cfg.epsilon);
        cfg.delta = a.value("delta", cfg.delta);
        cfg.obstruction_tol = a.value("obstruction_tol", cfg.obstruction_tol);
        cfg.growth_tol = a.value("growth_tol", cfg.growth_tol);
        cfg.returns_min = a.value("returns_min", cfg.returns_min);
        cfg.returns_max = a.value("returns_max", cfg.returns_max);
        cfg.shadow_count = a.value("shadow_count", cfg.shadow_count);
        cfg.samples = a.value("samples", cfg.samples);
        cfg.solve_tol = a.value("solve_tol", cfg.solve_tol);
        cfg.consistency_obstruction_tol =
            a.value("consistency_obstruction_tol", cfg.consistency_obstruction_tol);
        cfg.consistency_max_pairs = a.value("consistency_max_pairs", cfg.consistency_max_pairs);
        cfg.coverage_grid = a.value("coverage_grid", cfg.coverage_grid);
        cfg.enumeration_budget = a.value("enumeration_budget", cfg.enumeration_budget);
        cfg.growth_orbit_samples = a.value("growth_orbit_samples", cfg.growth_orbit_samples);
        if (cfg.n_max < 1 || cfg.period_bound < 1 || cfg.orbit_length < 1)
            throw ConfigError("analysis.n_max, period_bound and orbit_length must be >= 1");
        if (cfg.epsilon <= 0) throw ConfigError("analysis.epsilon must be > 0");
    }
    cfg.seed = j.value("seed", std::uint64_t(1));
    cfg.out_dir = j.value("out_dir", std::string("out"));
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse(j);
}

void RunConfig::apply_override(json& raw, const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key.path=value, got: " + key_eq_value);
    const std::string path = key_eq_value.substr(0, eq);
    const std::string value = key_eq_value.substr(eq + 1);

    json* node = &raw;
    size_t start = 0;
    for (;;) {
        const size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ConfigError("bad override path: " + path);
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

}  // namespace livsic
