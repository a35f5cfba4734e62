#ifndef LIVSIC_SOLVER_HPP
#define LIVSIC_SOLVER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "livsic/cocycle.hpp"
#include "livsic/growth.hpp"

namespace livsic {

// Transfer function t sampled along an orbit: t_0 = e and t_{k+1} = a(sigma^k x0) t_k,
// so t_k = a(k, x0). Entries are stored as unit * e^{log_scale} so that loudly
// divergent non-coboundaries still produce finite diagnostics. A spatial index
// over the orbit points supports nearest-neighbor Hölder extension.
struct TransferOptions {
    int holder_pairs = 2000;
    std::uint64_t seed = 1;
    double coverage_radius = -1.0;  // measured when negative
    int coverage_grid = 64;
};

class TransferTable {
public:

    // the Livšic construction along the orbit of x0
    static TransferTable solve(CocycleEvaluator& c, const SystemPoint& x0, std::int64_t length,
                               const TransferOptions& opts = {});

    // oracle table: entries taken from an explicit map (t_k = t_map(sigma^k x0));
    // used to compare a solved table against a known transfer function
    static TransferTable from_map(const HyperbolicSystem& sys, const RingOptions& ropts,
                                  const GeneratorMap& t_map, double declared_alpha,
                                  const SystemPoint& x0, std::int64_t length,
                                  const TransferOptions& opts = {});

    const HyperbolicSystem& system() const { return *sys_; }
    const SystemPoint& base() const { return base_; }
    std::int64_t length() const { return length_; }
    double coverage_radius() const { return coverage_; }
    double alpha() const { return alpha_; }
    const HolderFit& holder() const { return fit_; }
    bool all_entries_invertible() const { return all_invertible_; }
    double max_log_norm() const { return max_log_norm_; }
    double max_log_inv_norm() const { return max_log_inv_norm_; }

    // entry accessors; value_at materializes unit * e^{ls} (may overflow to inf
    // for divergent cocycles, which downstream reports treat as loud failures)
    RingElement value_at(std::int64_t k) const;
    double log_norm_at(std::int64_t k) const;
    const RingElement& unit_at(std::int64_t k) const { return unit_[static_cast<size_t>(k)]; }
    double log_scale_at(std::int64_t k) const { return ls_[static_cast<size_t>(k)]; }

    struct Lookup {
        RingElement value;         // materialized value at the nearest orbit point
        RingElement unit;          // scaled pieces, for overflow-free arithmetic
        double log_scale = 0.0;
        std::int64_t index = 0;    // nearest orbit index (ties: smallest)
        double distance = 0.0;
        double error_bound = 0.0;  // H_fit * distance^alpha
    };
    Lookup evaluate(const SystemPoint& x) const;  // CoverageError beyond 2x coverage

    // robust ln of group_dist(t_k, t_m)
    double log_group_gap(std::int64_t k, std::int64_t m) const;

    // exact distance between orbit points sigma^k x0 and sigma^m x0
    double orbit_distance(std::int64_t k, std::int64_t m) const;

    // near-return index pairs (k, m), k < m, with orbit_distance < delta,
    // sorted by separation m - k; capped at max_pairs after sorting
    std::vector<std::pair<std::int64_t, std::int64_t>> near_pairs(double delta,
                                                                  std::int64_t max_pairs) const;

private:
    const HyperbolicSystem* sys_ = nullptr;
    RingOptions ropts_;
    SystemPoint base_;
    std::int64_t length_ = 0;
    double coverage_ = 1.0;
    double alpha_ = 1.0;
    HolderFit fit_;
    bool all_invertible_ = true;
    double max_log_norm_ = 0.0;
    double max_log_inv_norm_ = 0.0;

    std::vector<RingElement> unit_;
    std::vector<RingElement> unit_inv_;  // empty elements where inversion failed
    std::vector<double> ls_;

    // SFT index: window buckets per depth (built lazily)
    mutable std::map<int, std::unordered_map<std::string, std::vector<std::int64_t>>> sft_buckets_;
    int index_depth_ = 1;
    // toral index: uniform grid over double coordinates
    int grid_ = 0;
    std::vector<std::vector<std::int64_t>> cells_;
    std::vector<std::pair<double, double>> coords_;

    TransferTable() = default;
    void finalize(const TransferOptions& opts);
    const std::unordered_map<std::string, std::vector<std::int64_t>>& sft_bucket_index(
        int depth) const;
    double dist_to_orbit_point(const SystemPoint& x, std::int64_t k) const;
};

struct ConsistencyReport {
    double delta = 0.0;
    double obstruction_tol = 1e-4;
    double pass_factor = 3.0;
    std::int64_t pairs_checked = 0;
    std::int64_t pairs_skipped = 0;  // closing unavailable at exact budget

    // worst pair by transfer gap against its propagated Hölder bound
    std::int64_t worst_k = -1, worst_m = -1;
    double worst_distance = 0.0;
    double worst_gap_log = 0.0;    // ln group_dist(t_m t_k^-1, e)
    double worst_bound_log = 0.0;  // ln of the certificate-telescoped bound
    double worst_ratio_log = 0.0;  // gap vs bound, in logs

    // worst periodic obstruction among the shadows of the near returns
    double worst_obstruction = 0.0;
    std::int64_t worst_obstruction_k = -1, worst_obstruction_m = -1;

    bool pass = false;
};

// Near-returns of the table orbit must carry transfer values within a Hölder
// bound. Each near pair (k, m) is closed into a periodic shadow p; the
// translation-invariant transfer gap group_dist(t_m t_k^-1, e) is compared
// against the bound telescoped through the shadowing certificate, and the
// shadow's own periodic obstruction is checked against obstruction_tol. A
// non-coboundary manifests as a failed pair.
ConsistencyReport consistency_check(const TransferTable& table, const CocycleEvaluator& c,
                                    double delta, double obstruction_tol = 1e-4,
                                    std::int64_t max_pairs = 400);

struct CoboundaryReport {
    int samples = 0;
    int covered = 0;
    double uncovered_ratio = 0.0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    SystemPoint worst_point;
    double tolerance = 0.0;
    std::string tolerance_formula;
    HolderFit table_fit;
    std::string failure_reason;  // empty when pass
    bool pass = false;
};

// residual group_dist(a(x), t(sigma x) t(x)^-1) over random points within
// coverage; tol < 0 selects the coverage-derived default
CoboundaryReport verify_coboundary(const TransferTable& table, const CocycleEvaluator& c,
                                   int samples, double tol, std::uint64_t seed);

struct CompareReport {
    int samples = 0;
    int covered = 0;
    double uncovered_ratio = 0.0;
    double spread = 0.0;  // max pairwise group_dist between c_x values
    double tolerance = 0.0;
    std::string tolerance_formula;
    bool pass = false;
};

// c_x = t1(x)^-1 t2(x) must be constant when both tables solve the same
// cocycle; the tolerance scales with both tables' Hölder extension errors
CompareReport compare_transfers(const TransferTable& t1, const TransferTable& t2, int samples,
                                std::uint64_t seed);

}  // namespace livsic

#endif
