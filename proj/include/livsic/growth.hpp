#ifndef LIVSIC_GROWTH_HPP
#define LIVSIC_GROWTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "livsic/cocycle.hpp"

namespace livsic {

// Sample basis for growth scans. The true s_n = max over X is replaced by a
// max over these points; reports always carry the description for honesty.
struct SampleSet {
    std::vector<SystemPoint> points;
    std::string description;
};

// periodic points of least period <= period_bound, plus orbit_samples points
// spaced along a dense orbit when one is supplied
SampleSet build_sample_set(const HyperbolicSystem& sys, int period_bound,
                           const DenseOrbit* orbit = nullptr, int orbit_samples = 0,
                           std::int64_t budget = 20'000'000);

// s(n,x) = ln ||a(n,x)||, any sign of n
double log_norm(const CocycleEvaluator& c, std::int64_t n, const SystemPoint& x);

struct GrowthReport {
    int n_max = 0;
    std::vector<double> s_hat;  // index n-1: max over samples of s(n, x)
    double r_hat = 0.0;         // min_n s_hat(n)/n  (the inf formula)
    int argmin_n = 1;
    std::string sample_description;
    double subadditivity_slack = 0.0;  // max positive violation on sampled sums
    bool subadditivity_ok = true;      // slack within 1e-9
};

GrowthReport uniform_rate(const CocycleEvaluator& c, const SampleSet& samples, int n_max);

struct PeriodicSpectrum {
    struct Entry {
        SystemPoint point;
        int period = 0;  // least period
        double r_p = 0.0;
    };
    std::vector<Entry> entries;
    double sup_rp = 0.0;
    int period_bound = 0;
};

PeriodicSpectrum periodic_rates(const CocycleEvaluator& c, int period_bound,
                                std::int64_t budget = 20'000'000);

struct InequalityVerdict {
    bool pass = false;
    double r_hat = 0.0;
    double sup_rp = 0.0;
    double gap = 0.0;  // r_hat - sup_rp
    double tol = 0.0;
};

InequalityVerdict growth_inequality_check(const GrowthReport& report,
                                          const PeriodicSpectrum& spectrum, double tol);

struct SubexponentialFit {
    double epsilon = 0.0;
    int n_max = 0;
    // least C with max_x ||family(n,x)|| <= C e^{eps n} over the sample set,
    // for a(n,x), a(-n,x) and [a(n,x)]^-1
    double C_fwd = 0.0, C_bwd = 0.0, C_inv = 0.0;
    // least-squares slopes of ln max-norm vs n; a slope well above zero means
    // no finite C stabilizes as n grows
    double slope_fwd = 0.0, slope_bwd = 0.0, slope_inv = 0.0;
};

SubexponentialFit subexponential_check(const CocycleEvaluator& c, double epsilon,
                                       const SampleSet& samples, int n_max);

struct DistortionReport {
    std::vector<double> per_n;  // max over samples of ln max(||a(n,x)||, ||a(n,x)^-1||)
    double rate = 0.0;          // fitted slope over the last half of the range
    int fit_from = 1;
    double alpha = 1.0;
    double lambda = 0.0;
    double margin = 0.0;  // alpha*lambda/2 - rate
    bool hypothesis_ok = false;
};

DistortionReport distortion_rate(const CocycleEvaluator& c, const SampleSet& samples, int n_max,
                                 double alpha, double lambda);

// all k in [1, n] with s(n,x) - s(n-k, sigma^k x) >= (r_ref - eps) k
std::vector<std::int64_t> hyperbolic_times(const CocycleEvaluator& c, const SystemPoint& x,
                                           std::int64_t n, double eps, double r_ref);

}  // namespace livsic

#endif
