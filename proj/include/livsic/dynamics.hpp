#ifndef LIVSIC_DYNAMICS_HPP
#define LIVSIC_DYNAMICS_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "livsic/errors.hpp"
#include "livsic/u256.hpp"

namespace livsic {

using Word = std::vector<std::uint8_t>;

// A point of a two-sided subshift: the bi-infinite sequence
//
//   ... L L | core | R R ...
//
// where L repeats to the left of core_start, core occupies coordinates
// [core_start, core_start + |core|), and R repeats to the right. Tail words
// are anchored at the core edges, so shifting only moves core_start.
// Canonical form (primitive tails, maximally absorbed core, normalized split
// for fully periodic sequences) makes equality structural.
class SymbolPoint {
public:
    SymbolPoint() = default;

    // bi-infinite repetition of `cycle`, anchored so coordinate 0 is cycle[0]
    static SymbolPoint periodic(const Word& cycle);
    static SymbolPoint from_parts(Word left, Word core, Word right, std::int64_t core_start);

    int symbol_at(std::int64_t i) const;
    SymbolPoint shifted(std::int64_t k) const;

    const Word& left() const { return left_; }
    const Word& core() const { return core_; }
    const Word& right() const { return right_; }
    std::int64_t core_start() const { return core_start_; }
    std::int64_t core_end() const { return core_start_ + static_cast<std::int64_t>(core_.size()); }

    // globally periodic sequence (canonical: empty core, equal tails, anchor 0)
    bool is_periodic_sequence() const;
    std::int64_t least_period() const;  // only for periodic sequences

    bool operator==(const SymbolPoint& o) const;
    bool operator<(const SymbolPoint& o) const;

private:
    Word left_{}, core_{}, right_{};
    std::int64_t core_start_ = 0;
    void canonicalize();
};

// Exact rational point of the 2-torus: coordinates nx/den, ny/den in [0,1)
// with gcd(nx, ny, den) = 1. Dense-orbit seeds use den = 2^bits; periodic
// points and closing constructions produce general denominators, which is why
// coordinates are rationals rather than raw fixed-point words.
class TorusPoint {
public:
    TorusPoint() : den_(U256::from_u64(1)) {}

    static TorusPoint from_fraction(U256 nx, U256 ny, U256 den);
    static TorusPoint from_doubles(double x, double y, unsigned bits = 64);

    const U256& num_x() const { return nx_; }
    const U256& num_y() const { return ny_; }
    const U256& den() const { return den_; }

    double xd() const { return nx_.to_double() / den_.to_double(); }
    double yd() const { return ny_.to_double() / den_.to_double(); }

    bool operator==(const TorusPoint& o) const {
        return nx_ == o.nx_ && ny_ == o.ny_ && den_ == o.den_;
    }
    bool operator<(const TorusPoint& o) const;

private:
    U256 nx_, ny_, den_;
};

using SystemPoint = std::variant<SymbolPoint, TorusPoint>;

bool point_equal(const SystemPoint& a, const SystemPoint& b);
bool point_less(const SystemPoint& a, const SystemPoint& b);

// Constants of the quantitative closing property. delta0 bounds usable
// near-returns, lambda is the expansion constant, C the geometric prefactor.
struct ClosingConstants {
    double delta0;
    double lambda;
    double C;
};

// Periodic shadow of an almost-returning orbit segment, with the per-step
// distances needed to re-check the exponential closeness bound.
struct ShadowCertificate {
    SystemPoint periodic_point;
    std::int64_t period = 0;
    double base_distance = 0.0;            // dist(x, sigma^n x)
    std::vector<double> step_distances;    // d_i = dist(sigma^i x, sigma^i p), i = 0..n
    double lambda_used = 0.0;
    double C_used = 0.0;
    bool bound_ok = false;

    // recompute d_i <= 2 C dist e^{-lambda min(i, n-i)} from stored distances
    bool check(double lambda, double C) const;
};

struct DenseOrbit {
    SystemPoint x0;
    std::int64_t length = 0;
    double coverage_radius = 1.0;
    std::string description;
};

namespace detail {

struct SftData {
    int k = 0;
    std::vector<std::vector<int>> adj;
    // BFS scaffolding: next hop on a shortest path between symbols, and a
    // shortest cycle through each symbol
    std::vector<std::vector<int>> next_hop;
    std::vector<Word> cycle_through;
};

struct ToralData {
    std::array<std::array<std::int64_t, 2>, 2> A{};
    std::array<std::array<std::int64_t, 2>, 2> Ainv{};
    unsigned bits = 128;
    double mu_u = 0.0;   // |unstable eigenvalue|
    double gu_l1 = 0.0;  // l1 norms of the eigen-projection rows
    double gs_l1 = 0.0;
};

}  // namespace detail

// Exact hyperbolic base system: a two-sided subshift of finite type with a
// primitive 0/1 adjacency matrix, or a hyperbolic automorphism of the
// 2-torus given by an integer matrix with |det| = 1 and |trace| > 2.
class HyperbolicSystem {
public:
    static HyperbolicSystem sft(int alphabet, std::vector<std::vector<int>> adjacency);
    static HyperbolicSystem full_shift(int alphabet);
    static HyperbolicSystem toral(std::array<std::array<std::int64_t, 2>, 2> matrix,
                                  unsigned precision_bits = 128);

    bool is_sft() const { return std::holds_alternative<SftData>(impl_); }
    bool is_toral() const { return !is_sft(); }

    const ClosingConstants& closing() const { return closing_; }
    void override_closing(const ClosingConstants& c) { closing_ = c; }

    int alphabet() const;
    bool edge(int a, int b) const;
    const std::array<std::array<std::int64_t, 2>, 2>& matrix() const;
    unsigned precision_bits() const;
    double expansion_factor() const;  // |mu_u| for toral, 2 for SFT metric

    // sigma^steps, exact and invertible
    SystemPoint apply(const SystemPoint& x, std::int64_t steps) const;

    // SFT: 2^-N with N the first disagreement radius (1 when centers differ
    // is capped to 1); toral: max over coordinates of circle distance.
    double metric(const SystemPoint& x, const SystemPoint& y) const;

    // all p with sigma^n p = p, complete, in canonical order
    std::vector<SystemPoint> periodic_points(int n, std::int64_t budget = 20'000'000) const;

    // total count of points with sigma^n p = p (trace / determinant oracle)
    std::int64_t periodic_point_count(int n) const;

    ShadowCertificate close_orbit(const SystemPoint& x, std::int64_t n) const;

    DenseOrbit dense_orbit(std::int64_t length, std::uint64_t seed,
                           int coverage_grid = 64) const;

    std::vector<std::int64_t> find_returns(const SystemPoint& x, std::int64_t n_min,
                                           std::int64_t n_max, double delta) const;

    SystemPoint random_point(std::mt19937_64& rng) const;

    // SFT only: a random admissible point that agrees with x on [-keep, keep]
    SymbolPoint random_perturbation(const SymbolPoint& x, int keep_radius,
                                    std::mt19937_64& rng) const;

    bool valid_point(const SystemPoint& x) const;

    // max over the test set of min distance from the test point to the orbit
    // segment {sigma^i x0 : 0 <= i <= length}
    double measure_coverage(const SystemPoint& x0, std::int64_t length,
                            int coverage_grid = 64) const;

    std::string describe() const;

private:
    using SftData = detail::SftData;
    using ToralData = detail::ToralData;

    std::variant<SftData, ToralData> impl_;
    ClosingConstants closing_{};

    const SftData& sft_data() const { return std::get<SftData>(impl_); }
    const ToralData& toral_data() const { return std::get<ToralData>(impl_); }

    // per-variant implementations (dynamics_sft.cpp / dynamics_torus.cpp)
    double sft_metric(const SymbolPoint& x, const SymbolPoint& y) const;
    std::vector<SystemPoint> sft_periodic_points(int n, std::int64_t budget) const;
    ShadowCertificate sft_close_orbit(const SymbolPoint& x, std::int64_t n, double dist) const;
    DenseOrbit sft_dense_orbit(std::int64_t length, int coverage_period) const;
    SymbolPoint sft_random_point(std::mt19937_64& rng, int core_radius) const;
    bool sft_valid(const SymbolPoint& x) const;
    double sft_coverage(const SymbolPoint& x0, std::int64_t length, int period) const;

    TorusPoint toral_apply(const TorusPoint& x, std::int64_t steps) const;
    double toral_metric(const TorusPoint& x, const TorusPoint& y) const;
    std::vector<SystemPoint> toral_periodic_points(int n, std::int64_t budget) const;
    ShadowCertificate toral_close_orbit(const TorusPoint& x, std::int64_t n, double dist) const;
    DenseOrbit toral_dense_orbit(std::int64_t length, std::uint64_t seed, int grid) const;
    double toral_coverage(const TorusPoint& x0, std::int64_t length, int grid) const;

    friend struct DynamicsTestHook;
};

}  // namespace livsic

#endif
