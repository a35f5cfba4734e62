#include "livsic/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "livsic/config.hpp"
#include "livsic/growth.hpp"
#include "livsic/solver.hpp"

namespace livsic {

namespace {

namespace fs = std::filesystem;

struct ReportWriter {
    fs::path dir;

    explicit ReportWriter(const std::string& out_dir) : dir(out_dir) {
        fs::create_directories(dir);
    }

    void write_json(const std::string& name, const json& j) const {
        std::ofstream out(dir / name);
        out << j.dump(2) << "\n";
    }

    void write_text(const std::string& name, const std::string& text) const {
        std::ofstream out(dir / name);
        out << text;
    }
};

json report_shell(const RunConfig& cfg, const std::string& command) {
    json j;
    json meta;
    meta["command"] = command;
    meta["out_dir"] = cfg.out_dir;
    meta["generated_at"] = static_cast<std::int64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    j["meta"] = std::move(meta);  // excluded from the determinism contract
    json cfg_echo = cfg.raw;      // run-specific output path lives in meta
    cfg_echo.erase("out_dir");
    j["config"] = std::move(cfg_echo);
    j["results"] = json::object();
    return j;
}

// JSON has no +-inf; clamp log-domain diagnostics to the double envelope
double jlog(double v) {
    if (std::isnan(v)) return 0.0;
    return std::clamp(v, -1e308, 1e308);
}

json fit_to_json(const HolderFit& f) {
    json j;
    j["alpha_fit"] = f.alpha_fit;
    j["H_fit"] = jlog(f.H_fit);
    j["log_H"] = jlog(f.log_H);
    j["pairs"] = f.pairs;
    j["all_values_equal"] = f.all_values_equal;
    j["fine_scale_decay"] = f.decays();
    return j;
}

// distinct periodic points keyed by least period, up to the bound
struct PeriodicScan {
    struct Row {
        int period;
        SystemPoint point;
        double deviation;
    };
    std::vector<Row> rows;
    double max_deviation = 0.0;
    int period_reached = 0;
    bool budget_exceeded = false;
};

PeriodicScan obstruction_scan(const CocycleEvaluator& c, int period_bound,
                              std::int64_t budget) {
    const HyperbolicSystem& sys = c.system();
    PeriodicScan scan;
    for (int n = 1; n <= period_bound; ++n) {
        std::vector<SystemPoint> pts;
        try {
            pts = sys.periodic_points(n, budget);
        } catch (const BudgetError&) {
            scan.budget_exceeded = true;
            break;
        }
        for (auto& p : pts) {
            bool least = true;
            for (int q = 1; q < n && least; ++q)
                if (n % q == 0 && point_equal(sys.apply(p, q), p)) least = false;
            if (!least) continue;
            const double dev = c.obstruction(p, n).second;
            scan.max_deviation = std::max(scan.max_deviation, dev);
            scan.rows.push_back({n, std::move(p), dev});
        }
        scan.period_reached = n;
    }
    return scan;
}

int cmd_obstructions(const RunConfig& cfg, std::ostream& out) {
    CocycleEvaluator c(cfg.system, cfg.generator, cfg.ring_opts);
    cfg.generator->validate(cfg.system, cfg.ring_opts);
    PeriodicScan scan = obstruction_scan(c, cfg.period_bound, cfg.enumeration_budget);

    json results;
    results["period_bound"] = cfg.period_bound;
    results["period_reached"] = scan.period_reached;
    results["budget_exceeded"] = scan.budget_exceeded;
    json entries = json::array();
    for (size_t i = 0; i < scan.rows.size(); ++i) {
        const auto& row = scan.rows[i];
        json e;
        e["id"] = static_cast<std::int64_t>(i);
        e["period"] = row.period;
        e["deviation"] = row.deviation;
        e["point"] = point_to_json(row.point);
        entries.push_back(std::move(e));
    }
    results["entries"] = std::move(entries);
    results["max_deviation"] = scan.max_deviation;
    results["tolerance"] = cfg.obstruction_tol;
    const bool pass = !scan.budget_exceeded && scan.max_deviation <= cfg.obstruction_tol;
    results["pass"] = pass;

    json report = report_shell(cfg, "obstructions");
    report["results"] = std::move(results);
    ReportWriter(cfg.out_dir).write_json("report.json", report);
    out << "obstructions: " << scan.rows.size() << " periodic points up to period "
        << scan.period_reached << ", max deviation " << scan.max_deviation
        << (pass ? " [pass]" : " [FAIL]") << "\n";
    return pass ? 0 : 1;
}

int cmd_growth(const RunConfig& cfg, std::ostream& out) {
    CocycleEvaluator c(cfg.system, cfg.generator, cfg.ring_opts);
    cfg.generator->validate(cfg.system, cfg.ring_opts);

    // sample basis: periodic points plus a handful of dense-orbit points
    const std::int64_t orbit_len = std::min<std::int64_t>(cfg.orbit_length, 8192);
    DenseOrbit orbit = cfg.system.dense_orbit(orbit_len, cfg.seed, cfg.coverage_grid);
    int period_bound = cfg.period_bound;
    SampleSet samples;
    bool budget_exceeded = false;
    for (;;) {
        try {
            samples = build_sample_set(cfg.system, period_bound, &orbit,
                                       cfg.growth_orbit_samples, cfg.enumeration_budget);
            break;
        } catch (const BudgetError&) {
            budget_exceeded = true;
            if (--period_bound < 1) throw;
        }
    }

    GrowthReport growth = uniform_rate(c, samples, cfg.n_max);
    PeriodicSpectrum spectrum = periodic_rates(c, period_bound, cfg.enumeration_budget);
    InequalityVerdict verdict = growth_inequality_check(growth, spectrum, cfg.growth_tol);
    SubexponentialFit subexp = subexponential_check(c, cfg.epsilon, samples, cfg.n_max);
    DistortionReport distortion = distortion_rate(c, samples, cfg.n_max,
                                                  cfg.generator->alpha(),
                                                  cfg.system.closing().lambda);

    json results;
    results["budget_exceeded"] = budget_exceeded;
    results["period_bound_used"] = period_bound;
    {
        json g;
        g["n_max"] = growth.n_max;
        g["r_hat"] = growth.r_hat;
        g["argmin_n"] = growth.argmin_n;
        g["sample_description"] = growth.sample_description;
        g["subadditivity_ok"] = growth.subadditivity_ok;
        g["subadditivity_slack"] = growth.subadditivity_slack;
        g["s_hat"] = growth.s_hat;
        results["growth"] = std::move(g);
    }
    {
        json s;
        s["period_bound"] = spectrum.period_bound;
        s["sup_rp"] = spectrum.sup_rp;
        s["count"] = spectrum.entries.size();
        json entries = json::array();
        for (const auto& e : spectrum.entries) {
            json row;
            row["period"] = e.period;
            row["r_p"] = e.r_p;
            row["point"] = point_to_json(e.point);
            entries.push_back(std::move(row));
        }
        s["entries"] = std::move(entries);
        results["spectrum"] = std::move(s);
    }
    {
        json v;
        v["pass"] = verdict.pass;
        v["r_hat"] = verdict.r_hat;
        v["sup_rp"] = verdict.sup_rp;
        v["gap"] = verdict.gap;
        v["tol"] = verdict.tol;
        results["inequality"] = std::move(v);
    }
    {
        json s;
        s["epsilon"] = subexp.epsilon;
        s["n_max"] = subexp.n_max;
        s["C_fwd"] = subexp.C_fwd;
        s["C_bwd"] = subexp.C_bwd;
        s["C_inv"] = subexp.C_inv;
        s["slope_fwd"] = subexp.slope_fwd;
        s["slope_bwd"] = subexp.slope_bwd;
        s["slope_inv"] = subexp.slope_inv;
        results["subexponential"] = std::move(s);
    }
    {
        json d;
        d["rate"] = distortion.rate;
        d["fit_from"] = distortion.fit_from;
        d["alpha"] = distortion.alpha;
        d["lambda"] = distortion.lambda;
        d["margin"] = distortion.margin;
        d["hypothesis_ok"] = distortion.hypothesis_ok;
        d["per_n"] = distortion.per_n;
        results["distortion"] = std::move(d);
    }

    json report = report_shell(cfg, "growth");
    report["results"] = std::move(results);
    ReportWriter writer(cfg.out_dir);
    writer.write_json("report.json", report);

    std::string csv = "n,s_n_hat,s_n_hat_over_n,distortion\n";
    for (int n = 1; n <= cfg.n_max; ++n) {
        const size_t i = static_cast<size_t>(n - 1);
        csv += std::to_string(n) + "," + std::to_string(growth.s_hat[i]) + "," +
               std::to_string(growth.s_hat[i] / n) + "," +
               std::to_string(distortion.per_n[i]) + "\n";
    }
    writer.write_text("series.csv", csv);

    out << "growth: r_hat " << growth.r_hat << ", sup r_p " << spectrum.sup_rp << ", gap "
        << verdict.gap << (verdict.pass ? " [pass]" : " [FAIL]") << "; distortion margin "
        << distortion.margin << (distortion.hypothesis_ok ? "" : " (hypothesis violated)")
        << "\n";
    return verdict.pass ? 0 : 1;
}

int cmd_shadow(const RunConfig& cfg, std::ostream& out) {
    const HyperbolicSystem& sys = cfg.system;
    const double delta = std::min(cfg.delta, sys.closing().delta0);
    std::mt19937_64 rng(cfg.seed);

    json certs = json::array();
    int collected = 0, violations = 0;
    std::int64_t skipped = 0;
    // regression of ln d_i against min(i, n-i) pools all certificates
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::int64_t fitn = 0;

    int attempts = 0;
    while (collected < cfg.shadow_count && attempts < 200 * cfg.shadow_count) {
        ++attempts;
        SystemPoint x = sys.random_point(rng);
        std::vector<std::int64_t> returns;
        try {
            returns = sys.find_returns(x, cfg.returns_min, cfg.returns_max, delta);
        } catch (const ConfigError&) {
            throw;
        }
        for (std::int64_t k : returns) {
            if (collected >= cfg.shadow_count) break;
            json entry;
            entry["n"] = k;
            try {
                ShadowCertificate cert = sys.close_orbit(x, k);
                entry["base_distance"] = cert.base_distance;
                entry["bound_ok"] = cert.bound_ok;
                double worst_ratio = 0.0;
                for (std::int64_t i = 0; i <= cert.period; ++i) {
                    const double d = cert.step_distances[static_cast<size_t>(i)];
                    if (d <= 0.0) continue;
                    const double m =
                        static_cast<double>(std::min<std::int64_t>(i, cert.period - i));
                    const double bound = 2.0 * cert.C_used * cert.base_distance *
                                         std::exp2(-(cert.lambda_used / std::log(2.0)) * m);
                    worst_ratio = std::max(worst_ratio, d / bound);
                    sx += m;
                    sy += std::log(d);
                    sxx += m * m;
                    sxy += m * std::log(d);
                    ++fitn;
                }
                entry["worst_ratio"] = worst_ratio;
                ++collected;
            } catch (const CertificateError& e) {
                entry["bound_ok"] = false;
                entry["error"] = e.what();
                ++violations;
                ++collected;
            } catch (const BudgetError&) {
                ++skipped;
                continue;
            }
            certs.push_back(std::move(entry));
        }
    }
    if (collected == 0)
        throw ConfigError("no near-returns found in [" + std::to_string(cfg.returns_min) + ", " +
                          std::to_string(cfg.returns_max) + "] at delta " +
                          std::to_string(delta));

    json results;
    results["delta"] = delta;
    results["requested"] = cfg.shadow_count;
    results["collected"] = collected;
    results["skipped_budget"] = skipped;
    results["violations"] = violations;
    results["configured"] = {{"delta0", sys.closing().delta0},
                             {"lambda", sys.closing().lambda},
                             {"C", sys.closing().C}};
    if (fitn >= 2) {
        const double slope = (fitn * sxy - sx * sy) / (fitn * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / fitn;
        results["lambda_fit"] = -slope;
        results["C_fit"] = std::exp(intercept) / 2.0;
    }
    results["certificates"] = std::move(certs);
    results["pass"] = violations == 0;

    json report = report_shell(cfg, "shadow");
    report["results"] = std::move(results);
    ReportWriter(cfg.out_dir).write_json("report.json", report);

    out << "shadow: " << collected << " certificates, " << violations << " violations";
    if (fitn >= 2)
        out << ", lambda_fit " << report["results"]["lambda_fit"].get<double>() << " vs "
            << sys.closing().lambda;
    out << (violations == 0 ? " [pass]" : " [FAIL]") << "\n";
    return violations == 0 ? 0 : 1;
}

json consistency_to_json(const ConsistencyReport& r) {
    json j;
    j["delta"] = r.delta;
    j["obstruction_tol"] = r.obstruction_tol;
    j["pass_factor"] = r.pass_factor;
    j["pairs_checked"] = r.pairs_checked;
    j["pairs_skipped"] = r.pairs_skipped;
    j["worst_k"] = r.worst_k;
    j["worst_m"] = r.worst_m;
    j["worst_distance"] = r.worst_distance;
    j["worst_gap_log"] = jlog(r.worst_gap_log);
    j["worst_bound_log"] = jlog(r.worst_bound_log);
    j["worst_ratio_log"] = jlog(r.worst_ratio_log);
    j["worst_obstruction"] = r.worst_obstruction;
    j["worst_obstruction_pair"] = {r.worst_obstruction_k, r.worst_obstruction_m};
    j["pass"] = r.pass;
    return j;
}

json coboundary_to_json(const CoboundaryReport& r) {
    json j;
    j["samples"] = r.samples;
    j["covered"] = r.covered;
    j["uncovered_ratio"] = r.uncovered_ratio;
    j["max_residual"] = jlog(r.max_residual);
    j["mean_residual"] = jlog(r.mean_residual);
    j["tolerance"] = r.tolerance;
    j["tolerance_formula"] = r.tolerance_formula;
    j["table_fit"] = fit_to_json(r.table_fit);
    j["pass"] = r.pass;
    if (!r.pass) {
        j["failure_reason"] = r.failure_reason;
        j["worst_point"] = point_to_json(r.worst_point);
    }
    return j;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    CocycleEvaluator c(cfg.system, cfg.generator, cfg.ring_opts);
    cfg.generator->validate(cfg.system, cfg.ring_opts);

    DenseOrbit orbit = cfg.system.dense_orbit(cfg.orbit_length, cfg.seed, cfg.coverage_grid);
    TransferOptions topts;
    topts.seed = cfg.seed ^ 0x7ab1e;
    topts.coverage_radius = orbit.coverage_radius;
    topts.coverage_grid = cfg.coverage_grid;
    TransferTable table = TransferTable::solve(c, orbit.x0, orbit.length, topts);

    json results;
    results["orbit"] = {{"length", orbit.length},
                        {"coverage_radius", orbit.coverage_radius},
                        {"description", orbit.description},
                        {"base", point_to_json(orbit.x0)}};
    results["holder_fit"] = fit_to_json(table.holder());
    results["all_entries_invertible"] = table.all_entries_invertible();

    bool consistency_pass = false;
    try {
        ConsistencyReport consistency = consistency_check(
            table, c, cfg.delta, cfg.consistency_obstruction_tol, cfg.consistency_max_pairs);
        results["consistency"] = consistency_to_json(consistency);
        consistency_pass = consistency.pass;
    } catch (const DegenerateSampleError& e) {
        results["consistency"] = {{"pass", false}, {"error", e.what()}};
    }

    CoboundaryReport verification =
        verify_coboundary(table, c, cfg.samples, cfg.solve_tol, cfg.seed ^ 0x5eed);
    results["verification"] = coboundary_to_json(verification);
    const bool pass = consistency_pass && verification.pass;
    results["pass"] = pass;

    json report = report_shell(cfg, "solve");
    report["results"] = std::move(results);
    ReportWriter writer(cfg.out_dir);
    writer.write_json("report.json", report);

    // transfer artifact: base point plus per-entry value; entry k sits at
    // sigma^k(base), recoverable exactly from the base point
    json artifact;
    artifact["base"] = point_to_json(table.base());
    artifact["length"] = table.length();
    artifact["coverage_radius"] = table.coverage_radius();
    artifact["alpha"] = table.alpha();
    json entries = json::array();
    for (std::int64_t k = 0; k <= table.length(); ++k) {
        json e;
        e["k"] = k;
        e["value"] = matrix_to_json(table.unit_at(k));
        if (table.log_scale_at(k) != 0.0) e["log_scale"] = table.log_scale_at(k);
        entries.push_back(std::move(e));
    }
    artifact["entries"] = std::move(entries);
    writer.write_json("transfer.json", artifact);

    std::string csv = "k,log_norm_t_k\n";
    for (std::int64_t k = 0; k <= table.length(); ++k)
        csv += std::to_string(k) + "," + std::to_string(table.log_norm_at(k)) + "\n";
    writer.write_text("transfer.csv", csv);

    out << "solve: orbit " << orbit.length << ", coverage " << orbit.coverage_radius
        << ", consistency " << (consistency_pass ? "pass" : "FAIL") << ", verification "
        << (verification.pass ? "pass" : "FAIL") << " (max residual "
        << verification.max_residual << " vs tol " << verification.tolerance << ")\n";
    return pass ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    // composite gate: obstructions, growth inequality, solve verification
    int worst = 0;
    ReportWriter writer(cfg.out_dir);

    RunConfig sub = cfg;
    sub.out_dir = (fs::path(cfg.out_dir) / "obstructions").string();
    worst = std::max(worst, cmd_obstructions(sub, out));
    sub.out_dir = (fs::path(cfg.out_dir) / "growth").string();
    worst = std::max(worst, cmd_growth(sub, out));
    sub.out_dir = (fs::path(cfg.out_dir) / "solve").string();
    worst = std::max(worst, cmd_solve(sub, out));

    json report = report_shell(cfg, "verify");
    report["results"]["pass"] = worst == 0;
    report["results"]["subreports"] = {"obstructions/report.json", "growth/report.json",
                                       "solve/report.json"};
    writer.write_json("report.json", report);
    out << "verify: " << (worst == 0 ? "[pass]" : "[FAIL]") << "\n";
    return worst;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cocycles over hyperbolic systems: obstructions, growth, shadowing, transfer functions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> overrides;

    for (const char* name : {"obstructions", "growth", "shadow", "solve", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_option("--override", overrides,
                        "dotted-path config override, e.g. analysis.n_max=80");
    }

    std::vector<const char*> argv;
    argv.push_back("livsic");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        json raw;
        try {
            in >> raw;
        } catch (const json::exception& e) {
            throw ConfigError("config parse error in " + config_path + ": " + e.what());
        }
        for (const auto& ov : overrides) RunConfig::apply_override(raw, ov);
        if (seed_set) raw["seed"] = seed;
        if (!out_dir.empty()) raw["out_dir"] = out_dir;
        RunConfig cfg = RunConfig::parse(raw);

        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "obstructions") return cmd_obstructions(cfg, out);
        if (sub == "growth") return cmd_growth(cfg, out);
        if (sub == "shadow") return cmd_shadow(cfg, out);
        if (sub == "solve") return cmd_solve(cfg, out);
        return cmd_verify(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace livsic
