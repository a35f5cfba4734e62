#include <algorithm>
#include <cmath>
#include <queue>

#include "livsic/dynamics.hpp"

namespace livsic {

bool point_equal(const SystemPoint& a, const SystemPoint& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<SymbolPoint>(a))
        return std::get<SymbolPoint>(a) == std::get<SymbolPoint>(b);
    return std::get<TorusPoint>(a) == std::get<TorusPoint>(b);
}

bool point_less(const SystemPoint& a, const SystemPoint& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    if (std::holds_alternative<SymbolPoint>(a))
        return std::get<SymbolPoint>(a) < std::get<SymbolPoint>(b);
    return std::get<TorusPoint>(a) < std::get<TorusPoint>(b);
}

bool ShadowCertificate::check(double lambda, double C) const {
    const std::int64_t n = period;
    // e^{-lambda m} computed as 2^{-m lambda/ln 2}: when lambda is ln 2 the
    // exponent ratio is exactly 1, so the dyadic SFT bound is evaluated
    // without rounding below the true value
    const double ratio = lambda / std::log(2.0);
    for (std::int64_t i = 0; i <= n; ++i) {
        const double d = step_distances[static_cast<size_t>(i)];
        if (d < 1e-300) continue;
        const double m = static_cast<double>(std::min(i, n - i));
        if (d > 2.0 * C * base_distance * std::exp2(-ratio * m)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

HyperbolicSystem HyperbolicSystem::sft(int alphabet, std::vector<std::vector<int>> adjacency) {
    if (alphabet < 1 || alphabet > 10)
        throw ConfigError("SFT alphabet size must be between 1 and 10");
    if (static_cast<int>(adjacency.size()) != alphabet)
        throw ConfigError("adjacency matrix size does not match alphabet");
    for (auto& row : adjacency) {
        if (static_cast<int>(row.size()) != alphabet)
            throw ConfigError("adjacency matrix is not square");
        for (int v : row)
            if (v != 0 && v != 1) throw ConfigError("adjacency entries must be 0 or 1");
    }

    // primitivity: some power of the matrix must be strictly positive
    {
        const int bound = (alphabet - 1) * (alphabet - 1) + 1;
        std::vector<std::vector<int>> p = adjacency;
        bool primitive = false;
        for (int step = 1; step <= std::max(bound, 1) && !primitive; ++step) {
            primitive = true;
            for (const auto& row : p)
                for (int v : row)
                    if (!v) primitive = false;
            if (primitive) break;
            std::vector<std::vector<int>> np(static_cast<size_t>(alphabet),
                                             std::vector<int>(static_cast<size_t>(alphabet), 0));
            for (int i = 0; i < alphabet; ++i)
                for (int t = 0; t < alphabet; ++t)
                    if (p[static_cast<size_t>(i)][static_cast<size_t>(t)])
                        for (int j = 0; j < alphabet; ++j)
                            np[static_cast<size_t>(i)][static_cast<size_t>(j)] |=
                                adjacency[static_cast<size_t>(t)][static_cast<size_t>(j)];
            p = np;
        }
        if (!primitive) throw ConfigError("SFT adjacency matrix is not primitive");
    }

    SftData d;
    d.k = alphabet;
    d.adj = std::move(adjacency);

    // all-pairs first hops by BFS
    d.next_hop.assign(static_cast<size_t>(alphabet), std::vector<int>(static_cast<size_t>(alphabet), -1));
    for (int src = 0; src < alphabet; ++src) {
        std::vector<int> parent(static_cast<size_t>(alphabet), -2);
        std::queue<int> q;
        parent[static_cast<size_t>(src)] = -1;
        q.push(src);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int t = 0; t < alphabet; ++t)
                if (d.adj[static_cast<size_t>(v)][static_cast<size_t>(t)] &&
                    parent[static_cast<size_t>(t)] == -2) {
                    parent[static_cast<size_t>(t)] = v;
                    q.push(t);
                }
        }
        for (int dst = 0; dst < alphabet; ++dst) {
            if (dst == src) continue;
            if (parent[static_cast<size_t>(dst)] == -2)
                throw ConfigError("SFT transition graph is not strongly connected");
            int v = dst;
            while (parent[static_cast<size_t>(v)] != src) v = parent[static_cast<size_t>(v)];
            d.next_hop[static_cast<size_t>(src)][static_cast<size_t>(dst)] = v;
        }
    }

    // shortest cycle through each symbol
    d.cycle_through.resize(static_cast<size_t>(alphabet));
    for (int s = 0; s < alphabet; ++s) {
        Word best;
        for (int t = 0; t < alphabet; ++t) {
            if (!d.adj[static_cast<size_t>(s)][static_cast<size_t>(t)]) continue;
            Word cyc;
            cyc.push_back(static_cast<std::uint8_t>(s));
            int cur = t;
            while (cur != s) {
                cyc.push_back(static_cast<std::uint8_t>(cur));
                cur = d.next_hop[static_cast<size_t>(cur)][static_cast<size_t>(s)];
            }
            if (best.empty() || cyc.size() < best.size()) best = std::move(cyc);
        }
        if (best.empty()) throw ConfigError("no cycle through symbol " + std::to_string(s));
        d.cycle_through[static_cast<size_t>(s)] = std::move(best);
    }

    HyperbolicSystem sys;
    sys.impl_ = std::move(d);
    sys.closing_ = {0.5, std::log(2.0), 0.5};
    return sys;
}

HyperbolicSystem HyperbolicSystem::full_shift(int alphabet) {
    return sft(alphabet, std::vector<std::vector<int>>(static_cast<size_t>(alphabet),
                                                       std::vector<int>(static_cast<size_t>(alphabet), 1)));
}

HyperbolicSystem HyperbolicSystem::toral(std::array<std::array<std::int64_t, 2>, 2> matrix,
                                         unsigned precision_bits) {
    const std::int64_t a = matrix[0][0], b = matrix[0][1], c = matrix[1][0], dd = matrix[1][1];
    const std::int64_t det = a * dd - b * c;
    const std::int64_t tr = a + dd;
    if (det != 1 && det != -1) throw ConfigError("toral matrix must have determinant +-1");
    if (std::abs(tr) <= 2) throw ConfigError("toral matrix must have |trace| > 2");
    for (const auto& row : matrix)
        for (std::int64_t v : row)
            if (std::abs(v) > 100) throw ConfigError("toral matrix entries must be within [-100, 100]");
    if (precision_bits < 16 || precision_bits > 128)
        throw ConfigError("torus precision must be between 16 and 128 bits");

    ToralData d;
    d.A = matrix;
    d.bits = precision_bits;
    // integer inverse: adj(A)/det with det = +-1
    if (det == 1)
        d.Ainv = {{{dd, -b}, {-c, a}}};
    else
        d.Ainv = {{{-dd, b}, {c, -a}}};

    const double s = std::sqrt(static_cast<double>(tr) * tr - 4.0 * det);
    const double mu1 = (tr + s) / 2.0, mu2 = (tr - s) / 2.0;
    const double mu_u = std::abs(mu1) > std::abs(mu2) ? mu1 : mu2;
    const double mu_s = std::abs(mu1) > std::abs(mu2) ? mu2 : mu1;
    d.mu_u = std::abs(mu_u);

    auto eigvec = [&](double mu) -> std::array<double, 2> {
        if (b != 0) return {static_cast<double>(b), mu - a};
        return {mu - dd, static_cast<double>(c)};
    };
    auto normalize = [](std::array<double, 2> v) {
        const double n = std::max(std::abs(v[0]), std::abs(v[1]));
        return std::array<double, 2>{v[0] / n, v[1] / n};
    };
    const auto vu = normalize(eigvec(mu_u));
    const auto vs = normalize(eigvec(mu_s));
    const double detV = vu[0] * vs[1] - vs[0] * vu[1];
    // rows of V^-1: coordinates of the eigen-projections
    d.gu_l1 = (std::abs(vs[1]) + std::abs(vs[0])) / std::abs(detV);
    d.gs_l1 = (std::abs(vu[1]) + std::abs(vu[0])) / std::abs(detV);

    HyperbolicSystem sys;
    const double lambda = std::log(d.mu_u);
    const double C = std::max(d.gu_l1, d.gs_l1) / (1.0 - 1.0 / d.mu_u);
    const double delta0 = std::min(0.125, 0.49 / (2.0 * C));
    sys.impl_ = std::move(d);
    sys.closing_ = {delta0, lambda, C};
    return sys;
}

// ---------------------------------------------------------------------------
// accessors
// ---------------------------------------------------------------------------

int HyperbolicSystem::alphabet() const { return sft_data().k; }

bool HyperbolicSystem::edge(int a, int b) const {
    const SftData& d = sft_data();
    return a >= 0 && b >= 0 && a < d.k && b < d.k &&
           d.adj[static_cast<size_t>(a)][static_cast<size_t>(b)] != 0;
}

const std::array<std::array<std::int64_t, 2>, 2>& HyperbolicSystem::matrix() const {
    return toral_data().A;
}

unsigned HyperbolicSystem::precision_bits() const { return toral_data().bits; }

double HyperbolicSystem::expansion_factor() const {
    return is_sft() ? 2.0 : toral_data().mu_u;
}

std::string HyperbolicSystem::describe() const {
    if (is_sft()) {
        const SftData& d = sft_data();
        bool full = true;
        for (const auto& row : d.adj)
            for (int v : row)
                if (!v) full = false;
        return (full ? "full shift" : "SFT") + std::string(" on ") + std::to_string(d.k) +
               " symbols";
    }
    const ToralData& d = toral_data();
    return "toral automorphism [[" + std::to_string(d.A[0][0]) + "," + std::to_string(d.A[0][1]) +
           "],[" + std::to_string(d.A[1][0]) + "," + std::to_string(d.A[1][1]) + "]] at " +
           std::to_string(d.bits) + " bits";
}

// ---------------------------------------------------------------------------
// dispatched operations
// ---------------------------------------------------------------------------

SystemPoint HyperbolicSystem::apply(const SystemPoint& x, std::int64_t steps) const {
    if (is_sft()) return std::get<SymbolPoint>(x).shifted(steps);
    return toral_apply(std::get<TorusPoint>(x), steps);
}

double HyperbolicSystem::metric(const SystemPoint& x, const SystemPoint& y) const {
    if (is_sft()) return sft_metric(std::get<SymbolPoint>(x), std::get<SymbolPoint>(y));
    return toral_metric(std::get<TorusPoint>(x), std::get<TorusPoint>(y));
}

std::vector<SystemPoint> HyperbolicSystem::periodic_points(int n, std::int64_t budget) const {
    if (n < 1) throw ConfigError("periodic_points needs n >= 1");
    if (is_sft()) return sft_periodic_points(n, budget);
    return toral_periodic_points(n, budget);
}

std::int64_t HyperbolicSystem::periodic_point_count(int n) const {
    if (n < 1) throw ConfigError("periodic_point_count needs n >= 1");
    using I128 = __int128;
    const I128 limit = I128(1) << 62;
    if (is_sft()) {
        const SftData& d = sft_data();
        const int k = d.k;
        std::vector<std::vector<I128>> p(static_cast<size_t>(k), std::vector<I128>(static_cast<size_t>(k), 0));
        for (int i = 0; i < k; ++i) p[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
        for (int step = 0; step < n; ++step) {
            std::vector<std::vector<I128>> np(static_cast<size_t>(k),
                                              std::vector<I128>(static_cast<size_t>(k), 0));
            for (int i = 0; i < k; ++i)
                for (int t = 0; t < k; ++t)
                    if (p[static_cast<size_t>(i)][static_cast<size_t>(t)])
                        for (int j = 0; j < k; ++j) {
                            np[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
                                p[static_cast<size_t>(i)][static_cast<size_t>(t)] *
                                d.adj[static_cast<size_t>(t)][static_cast<size_t>(j)];
                            if (np[static_cast<size_t>(i)][static_cast<size_t>(j)] > limit)
                                throw BudgetError("SFT cycle count overflow");
                        }
            p = np;
        }
        I128 trace = 0;
        for (int i = 0; i < k; ++i) trace += p[static_cast<size_t>(i)][static_cast<size_t>(i)];
        return static_cast<std::int64_t>(trace);
    }
    const auto& A = toral_data().A;
    I128 p00 = 1, p01 = 0, p10 = 0, p11 = 1;
    for (int step = 0; step < n; ++step) {
        const I128 q00 = p00 * A[0][0] + p01 * A[1][0];
        const I128 q01 = p00 * A[0][1] + p01 * A[1][1];
        const I128 q10 = p10 * A[0][0] + p11 * A[1][0];
        const I128 q11 = p10 * A[0][1] + p11 * A[1][1];
        p00 = q00;
        p01 = q01;
        p10 = q10;
        p11 = q11;
        if (p00 > limit || p00 < -limit || p11 > limit || p11 < -limit)
            throw BudgetError("toral fixed point count overflow");
    }
    const I128 det = (p00 - 1) * (p11 - 1) - p01 * p10;
    return static_cast<std::int64_t>(det < 0 ? -det : det);
}

ShadowCertificate HyperbolicSystem::close_orbit(const SystemPoint& x, std::int64_t n) const {
    if (n < 1) throw ConfigError("close_orbit needs n >= 1");
    const double dist = metric(x, apply(x, n));
    if (dist > closing_.delta0)
        throw TooFarError("dist(x, sigma^n x) = " + std::to_string(dist) + " exceeds delta0 = " +
                          std::to_string(closing_.delta0));
    ShadowCertificate cert = is_sft()
                                 ? sft_close_orbit(std::get<SymbolPoint>(x), n, dist)
                                 : toral_close_orbit(std::get<TorusPoint>(x), n, dist);
    if (!cert.bound_ok)
        throw CertificateError("shadowing certificate violates the configured (lambda, C) bound");
    return cert;
}

DenseOrbit HyperbolicSystem::dense_orbit(std::int64_t length, std::uint64_t seed,
                                         int coverage_grid) const {
    if (length < 1) throw ConfigError("dense_orbit needs length >= 1");
    if (is_sft()) return sft_dense_orbit(length, /*coverage_period=*/8);
    return toral_dense_orbit(length, seed, coverage_grid);
}

double HyperbolicSystem::measure_coverage(const SystemPoint& x0, std::int64_t length,
                                          int coverage_grid) const {
    if (is_sft()) return sft_coverage(std::get<SymbolPoint>(x0), length, 8);
    return toral_coverage(std::get<TorusPoint>(x0), length, coverage_grid);
}

std::vector<std::int64_t> HyperbolicSystem::find_returns(const SystemPoint& x, std::int64_t n_min,
                                                         std::int64_t n_max, double delta) const {
    if (n_min > n_max) throw ConfigError("find_returns needs n_min <= n_max");
    std::vector<std::int64_t> out;
    if (is_sft()) {
        const SymbolPoint& p = std::get<SymbolPoint>(x);
        // dist(x, sigma^k x) < delta iff x_j = x_{j+k} for all |j| < scan,
        // where scan is the least s with 2^-s < delta; compare symbols
        // directly, no point copies
        int scan = 0;
        while (scan < 1073 && std::ldexp(1.0, -scan) >= delta) ++scan;
        for (std::int64_t k = std::max<std::int64_t>(n_min, 1); k <= n_max; ++k) {
            bool ret = true;
            for (std::int64_t m = 0; m < scan && ret; ++m)
                ret = p.symbol_at(m) == p.symbol_at(m + k) &&
                      p.symbol_at(-m) == p.symbol_at(-m + k);
            if (ret) out.push_back(k);
        }
        return out;
    }
    const TorusPoint& p = std::get<TorusPoint>(x);
    TorusPoint y = p;
    for (std::int64_t k = 1; k <= n_max; ++k) {
        y = toral_apply(y, 1);
        if (k >= n_min && toral_metric(p, y) < delta) out.push_back(k);
    }
    return out;
}

SystemPoint HyperbolicSystem::random_point(std::mt19937_64& rng) const {
    if (is_sft()) return sft_random_point(rng, 48);
    const ToralData& d = toral_data();
    auto rand_num = [&](unsigned bits) {
        U256 r;
        r.w[0] = rng();
        if (bits >= 64) {
            if (bits > 64) r.w[1] = rng();
            if (bits > 64 && bits < 128) r.w[1] &= (std::uint64_t(1) << (bits - 64)) - 1;
        } else {
            r.w[0] &= (std::uint64_t(1) << bits) - 1;
        }
        return r;
    };
    return TorusPoint::from_fraction(rand_num(d.bits), rand_num(d.bits), U256::pow2(d.bits));
}

bool HyperbolicSystem::valid_point(const SystemPoint& x) const {
    if (is_sft()) {
        if (!std::holds_alternative<SymbolPoint>(x)) return false;
        return sft_valid(std::get<SymbolPoint>(x));
    }
    return std::holds_alternative<TorusPoint>(x);
}

}  // namespace livsic
