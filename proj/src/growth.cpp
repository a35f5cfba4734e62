#include "livsic/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace livsic {

namespace {

bool has_least_period(const HyperbolicSystem& sys, const SystemPoint& p, int n) {
    if (sys.is_sft()) return std::get<SymbolPoint>(p).least_period() == n;
    for (int q = 1; q < n; ++q)
        if (n % q == 0 && point_equal(sys.apply(p, q), p)) return false;
    return true;
}

double ls_slope(const std::vector<double>& y, int from, int to) {
    // least squares of y[n-1] against n over [from, to]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int n = from; n <= to; ++n) {
        const double v = y[static_cast<size_t>(n - 1)];
        sx += n;
        sy += v;
        sxx += static_cast<double>(n) * n;
        sxy += n * v;
        ++count;
    }
    if (count < 2) return 0.0;
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace

SampleSet build_sample_set(const HyperbolicSystem& sys, int period_bound,
                           const DenseOrbit* orbit, int orbit_samples, std::int64_t budget) {
    SampleSet set;
    std::int64_t periodic_count = 0;
    for (int n = 1; n <= period_bound; ++n) {
        for (auto& p : sys.periodic_points(n, budget)) {
            if (!has_least_period(sys, p, n)) continue;  // seen at a smaller period
            set.points.push_back(std::move(p));
            ++periodic_count;
        }
    }
    std::int64_t orbit_count = 0;
    if (orbit != nullptr && orbit_samples > 0) {
        for (int i = 0; i < orbit_samples; ++i) {
            const std::int64_t idx = orbit->length * i / orbit_samples;
            set.points.push_back(sys.apply(orbit->x0, idx));
            ++orbit_count;
        }
    }
    set.description = "periodic points of least period <= " + std::to_string(period_bound) +
                      " (" + std::to_string(periodic_count) + ")";
    if (orbit_count > 0)
        set.description += " + " + std::to_string(orbit_count) + " dense-orbit samples";
    return set;
}

double log_norm(const CocycleEvaluator& c, std::int64_t n, const SystemPoint& x) {
    if (n == 0) return 0.0;
    if (n > 0) return c.norm_sweep(x, static_cast<int>(n), false, false).s_fwd.back();
    return c.norm_sweep(x, static_cast<int>(-n), false, true).s_bwd.back();
}

GrowthReport uniform_rate(const CocycleEvaluator& c, const SampleSet& samples, int n_max) {
    if (samples.points.empty()) throw ConfigError("uniform_rate needs a nonempty sample set");
    if (n_max < 1) throw ConfigError("uniform_rate needs n_max >= 1");
    GrowthReport report;
    report.n_max = n_max;
    report.sample_description = samples.description;
    report.s_hat.assign(static_cast<size_t>(n_max), -std::numeric_limits<double>::infinity());
    for (const SystemPoint& x : samples.points) {
        const auto sweep = c.norm_sweep(x, n_max, false, false);
        for (int n = 1; n <= n_max; ++n)
            report.s_hat[static_cast<size_t>(n - 1)] =
                std::max(report.s_hat[static_cast<size_t>(n - 1)],
                         sweep.s_fwd[static_cast<size_t>(n - 1)]);
    }
    report.r_hat = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        const double rate = report.s_hat[static_cast<size_t>(n - 1)] / n;
        if (rate < report.r_hat) {
            report.r_hat = rate;
            report.argmin_n = n;
        }
    }
    double slack = 0.0;
    for (int n = 1; n <= n_max; ++n)
        for (int m = 1; n + m <= n_max; ++m)
            slack = std::max(slack, report.s_hat[static_cast<size_t>(n + m - 1)] -
                                        report.s_hat[static_cast<size_t>(n - 1)] -
                                        report.s_hat[static_cast<size_t>(m - 1)]);
    report.subadditivity_slack = slack;
    report.subadditivity_ok = slack <= 1e-9;
    return report;
}

PeriodicSpectrum periodic_rates(const CocycleEvaluator& c, int period_bound,
                                std::int64_t budget) {
    if (period_bound < 1) throw ConfigError("periodic_rates needs a period bound >= 1");
    const HyperbolicSystem& sys = c.system();
    PeriodicSpectrum spec;
    spec.period_bound = period_bound;
    spec.sup_rp = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= period_bound; ++n) {
        for (auto& p : sys.periodic_points(n, budget)) {
            if (!has_least_period(sys, p, n)) continue;
            PeriodicSpectrum::Entry entry;
            entry.period = n;
            entry.r_p = c.norm_sweep(p, n, false, false).s_fwd.back() / n;
            entry.point = std::move(p);
            spec.sup_rp = std::max(spec.sup_rp, entry.r_p);
            spec.entries.push_back(std::move(entry));
        }
    }
    return spec;
}

InequalityVerdict growth_inequality_check(const GrowthReport& report,
                                          const PeriodicSpectrum& spectrum, double tol) {
    InequalityVerdict v;
    v.r_hat = report.r_hat;
    v.sup_rp = spectrum.sup_rp;
    v.gap = report.r_hat - spectrum.sup_rp;
    v.tol = tol;
    v.pass = v.gap <= tol;
    return v;
}

SubexponentialFit subexponential_check(const CocycleEvaluator& c, double epsilon,
                                       const SampleSet& samples, int n_max) {
    if (epsilon <= 0.0) throw ConfigError("subexponential_check needs epsilon > 0");
    if (samples.points.empty()) throw ConfigError("subexponential_check needs samples");
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> fwd(static_cast<size_t>(n_max), neg_inf);
    std::vector<double> bwd(static_cast<size_t>(n_max), neg_inf);
    std::vector<double> inv(static_cast<size_t>(n_max), neg_inf);
    for (const SystemPoint& x : samples.points) {
        const auto sweep = c.norm_sweep(x, n_max, true, true);
        for (int n = 1; n <= n_max; ++n) {
            const size_t i = static_cast<size_t>(n - 1);
            fwd[i] = std::max(fwd[i], sweep.s_fwd[i]);
            bwd[i] = std::max(bwd[i], sweep.s_bwd[i]);
            inv[i] = std::max(inv[i], sweep.s_fwd_inv[i]);
        }
    }
    SubexponentialFit fit;
    fit.epsilon = epsilon;
    fit.n_max = n_max;
    auto least_c = [&](const std::vector<double>& f) {
        double best = 0.0;  // the n = 0 term: ||a(0,x)|| = 1 forces C >= 1
        for (int n = 1; n <= n_max; ++n)
            best = std::max(best, f[static_cast<size_t>(n - 1)] - epsilon * n);
        return std::exp(best);
    };
    fit.C_fwd = least_c(fwd);
    fit.C_bwd = least_c(bwd);
    fit.C_inv = least_c(inv);
    fit.slope_fwd = ls_slope(fwd, 1, n_max);
    fit.slope_bwd = ls_slope(bwd, 1, n_max);
    fit.slope_inv = ls_slope(inv, 1, n_max);
    return fit;
}

DistortionReport distortion_rate(const CocycleEvaluator& c, const SampleSet& samples, int n_max,
                                 double alpha, double lambda) {
    if (samples.points.empty()) throw ConfigError("distortion_rate needs samples");
    DistortionReport report;
    report.alpha = alpha;
    report.lambda = lambda;
    report.per_n.assign(static_cast<size_t>(n_max), -std::numeric_limits<double>::infinity());
    for (const SystemPoint& x : samples.points) {
        const auto sweep = c.norm_sweep(x, n_max, true, false);
        for (int n = 1; n <= n_max; ++n) {
            const size_t i = static_cast<size_t>(n - 1);
            report.per_n[i] = std::max(report.per_n[i],
                                       std::max(sweep.s_fwd[i], sweep.s_fwd_inv[i]));
        }
    }
    report.fit_from = std::max(1, n_max / 2);
    report.rate = ls_slope(report.per_n, report.fit_from, n_max);
    report.margin = alpha * lambda / 2.0 - report.rate;
    report.hypothesis_ok = report.margin > 0.0;
    return report;
}

std::vector<std::int64_t> hyperbolic_times(const CocycleEvaluator& c, const SystemPoint& x,
                                           std::int64_t n, double eps, double r_ref) {
    const std::vector<double> suffix = c.suffix_log_norms(x, n);
    const double s_n = suffix[0];
    std::vector<std::int64_t> out;
    for (std::int64_t k = 1; k <= n; ++k)
        if (s_n - suffix[static_cast<size_t>(k)] >= (r_ref - eps) * static_cast<double>(k))
            out.push_back(k);
    return out;
}

}  // namespace livsic
