#include <algorithm>
#include <cmath>
#include <random>

#include "livsic/dynamics.hpp"

namespace livsic {

namespace {

using I128 = __int128;

struct SignedU256 {
    bool neg = false;
    U256 mag;

    static SignedU256 from(const U256& m, bool negative) {
        SignedU256 s;
        s.mag = m;
        s.neg = negative && !m.is_zero();
        return s;
    }

    SignedU256 add(const SignedU256& o) const {
        if (neg == o.neg) return from(mag.add(o.mag), neg);
        if (o.mag <= mag) return from(mag.sub(o.mag), neg);
        return from(o.mag.sub(mag), o.neg);
    }

    SignedU256 negated() const { return from(mag, !neg); }
};

U256 u256_from_i128_abs(I128 v) {
    unsigned __int128 a = v < 0 ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    return U256::from_u128(a);
}

// x * coef mod den for signed small coefficient
U256 mulmod_signed(const U256& x, I128 coef, const U256& den) {
    U256 t = U256::mulmod(x, u256_from_i128_abs(coef), den);
    if (coef < 0 && !t.is_zero()) t = den.sub(t);
    return t;
}

// signed value reduced into [0, M)
U256 reduce_signed(const SignedU256& v, const U256& M) {
    U256 r = v.mag.mod(M);
    if (v.neg && !r.is_zero()) r = M.sub(r);
    return r;
}

double circle_dist(const U256& a, const U256& b, const U256& den) {
    const U256 d = b <= a ? a.sub(b) : b.sub(a);
    const U256 comp = den.sub(d);
    const U256& smaller = d <= comp ? d : comp;
    return smaller.to_double() / den.to_double();
}

std::array<std::array<I128, 2>, 2> matrix_power(const std::array<std::array<std::int64_t, 2>, 2>& A,
                                                std::int64_t n, int limit_bits = 118) {
    const I128 limit = I128(1) << limit_bits;
    std::array<std::array<I128, 2>, 2> P{{{1, 0}, {0, 1}}};
    for (std::int64_t s = 0; s < n; ++s) {
        std::array<std::array<I128, 2>, 2> R{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                I128 acc = 0;
                for (int t = 0; t < 2; ++t) acc += P[i][t] * I128(A[t][j]);
                if (acc > limit || acc < -limit)
                    throw BudgetError("toral matrix power exceeds exact budget at n=" +
                                      std::to_string(n));
                R[i][j] = acc;
            }
        P = R;
    }
    return P;
}

// det(A^n - I) from the trace: products of A^n entries would overflow, but
// det(A^n) - tr(A^n) + 1 involves only sums
I128 det_power_minus_identity(const std::array<std::array<I128, 2>, 2>& An, std::int64_t detA,
                              std::int64_t n) {
    const I128 detAn = (detA == 1 || n % 2 == 0) ? 1 : -1;
    return detAn - (An[0][0] + An[1][1]) + 1;
}

}  // namespace

TorusPoint TorusPoint::from_fraction(U256 nx, U256 ny, U256 den) {
    if (den.is_zero()) throw std::logic_error("torus point with zero denominator");
    nx = nx.mod(den);
    ny = ny.mod(den);
    U256 g = U256::gcd(U256::gcd(nx, ny), den);
    if (!(g == U256::from_u64(1))) {
        nx = nx.div_exact(g);
        ny = ny.div_exact(g);
        den = den.div_exact(g);
    }
    TorusPoint p;
    p.nx_ = nx;
    p.ny_ = ny;
    p.den_ = den;
    return p;
}

TorusPoint TorusPoint::from_doubles(double x, double y, unsigned bits) {
    if (bits > 128) bits = 128;
    const double scale = std::ldexp(1.0, static_cast<int>(bits));
    auto wrap = [](double v) {
        v -= std::floor(v);
        return v < 0 ? v + 1.0 : v;
    };
    auto to_num = [&](double v) {
        const double s = std::floor(wrap(v) * scale);
        // split into two 64-bit halves to stay exact for bits <= 128
        const double hi = std::floor(s / 18446744073709551616.0);
        const double lo = s - hi * 18446744073709551616.0;
        U256 r = U256::from_u64(static_cast<std::uint64_t>(hi));
        for (int i = 0; i < 64; ++i) r = r.shl1();
        return r.add(U256::from_u64(static_cast<std::uint64_t>(lo)));
    };
    return from_fraction(to_num(x), to_num(y), U256::pow2(bits));
}

bool TorusPoint::operator<(const TorusPoint& o) const {
    // exact fraction comparison via doubles first, cross products on ties
    const double ax = xd(), bx = o.xd();
    if (ax != bx) return ax < bx;
    const double ay = yd(), by = o.yd();
    if (ay != by) return ay < by;
    // rare: settle exactly using the general product (widths permitting)
    try {
        const U256 l1 = nx_.mul(o.den_), r1 = o.nx_.mul(den_);
        if (!(l1 == r1)) return l1 < r1;
        const U256 l2 = ny_.mul(o.den_), r2 = o.ny_.mul(den_);
        if (!(l2 == r2)) return l2 < r2;
        return false;
    } catch (const BudgetError&) {
        return false;  // indistinguishable at budget; treat as equal for ordering
    }
}

// ---------------------------------------------------------------------------
// toral system operations
// ---------------------------------------------------------------------------

TorusPoint HyperbolicSystem::toral_apply(const TorusPoint& x, std::int64_t steps) const {
    const ToralData& d = toral_data();
    const auto& M = steps >= 0 ? d.A : d.Ainv;
    std::int64_t count = steps >= 0 ? steps : -steps;
    TorusPoint p = x;
    for (std::int64_t s = 0; s < count; ++s) {
        const U256& den = p.den();
        U256 nx = U256::addmod(mulmod_signed(p.num_x(), M[0][0], den),
                               mulmod_signed(p.num_y(), M[0][1], den), den);
        U256 ny = U256::addmod(mulmod_signed(p.num_x(), M[1][0], den),
                               mulmod_signed(p.num_y(), M[1][1], den), den);
        p = TorusPoint::from_fraction(nx, ny, den);
    }
    return p;
}

double HyperbolicSystem::toral_metric(const TorusPoint& x, const TorusPoint& y) const {
    if (x.den() == y.den()) {
        return std::max(circle_dist(x.num_x(), y.num_x(), x.den()),
                        circle_dist(x.num_y(), y.num_y(), x.den()));
    }
    try {
        const U256 g = U256::gcd(x.den(), y.den());
        const U256 fx = y.den().div_exact(g);  // multiplier for x side
        const U256 fy = x.den().div_exact(g);
        if (x.den().bit_length() + fx.bit_length() <= 255) {
            const U256 l = x.den().mul(fx);
            const U256 ax = x.num_x().mul(fx), ay = x.num_y().mul(fx);
            const U256 bx = y.num_x().mul(fy), by = y.num_y().mul(fy);
            return std::max(circle_dist(ax, bx, l), circle_dist(ay, by, l));
        }
    } catch (const BudgetError&) {
    }
    // widths beyond exact budget: fall back to double arithmetic
    auto circ = [](double a, double b) {
        double t = std::abs(a - b);
        return std::min(t, 1.0 - t);
    };
    return std::max(circ(x.xd(), y.xd()), circ(x.yd(), y.yd()));
}

std::vector<SystemPoint> HyperbolicSystem::toral_periodic_points(int n, std::int64_t budget) const {
    const ToralData& d = toral_data();
    const std::int64_t detA = d.A[0][0] * d.A[1][1] - d.A[0][1] * d.A[1][0];
    auto An = matrix_power(d.A, n, 29);  // enumeration boxes blow the budget far earlier
    std::array<std::array<I128, 2>, 2> B{{{An[0][0] - 1, An[0][1]}, {An[1][0], An[1][1] - 1}}};
    I128 det = det_power_minus_identity(An, detA, n);
    if (det == 0) throw std::logic_error("degenerate A^n - I for hyperbolic matrix");
    std::array<std::array<I128, 2>, 2> adj{{{B[1][1], -B[0][1]}, {-B[1][0], B[0][0]}}};
    if (det < 0) {
        det = -det;
        for (auto& row : adj)
            for (auto& v : row) v = -v;
    }

    auto range = [](I128 a, I128 b) {
        return std::pair<I128, I128>{std::min<I128>(0, a) + std::min<I128>(0, b),
                                     std::max<I128>(0, a) + std::max<I128>(0, b)};
    };
    const auto [lo1, hi1] = range(B[0][0], B[0][1]);
    const auto [lo2, hi2] = range(B[1][0], B[1][1]);
    const I128 box = (hi1 - lo1 + 1) * (hi2 - lo2 + 1);
    if (box > budget) throw BudgetError("periodic point enumeration box exceeds budget");

    struct Keyed {
        I128 u1, u2;
        SystemPoint p;
    };
    std::vector<Keyed> found;
    for (I128 k1 = lo1; k1 <= hi1; ++k1)
        for (I128 k2 = lo2; k2 <= hi2; ++k2) {
            const I128 u1 = adj[0][0] * k1 + adj[0][1] * k2;
            const I128 u2 = adj[1][0] * k1 + adj[1][1] * k2;
            if (u1 < 0 || u1 >= det || u2 < 0 || u2 >= det) continue;
            found.push_back({u1, u2,
                             TorusPoint::from_fraction(u256_from_i128_abs(u1),
                                                       u256_from_i128_abs(u2),
                                                       u256_from_i128_abs(det))});
        }
    if (static_cast<I128>(found.size()) != det)
        throw std::logic_error("toral periodic point count mismatch with |det(A^n - I)|");
    std::sort(found.begin(), found.end(), [](const Keyed& a, const Keyed& b) {
        return a.u1 != b.u1 ? a.u1 < b.u1 : a.u2 < b.u2;
    });
    std::vector<SystemPoint> out;
    out.reserve(found.size());
    for (auto& f : found) out.push_back(std::move(f.p));
    return out;
}

ShadowCertificate HyperbolicSystem::toral_close_orbit(const TorusPoint& x, std::int64_t n,
                                                      double dist) const {
    const ToralData& d = toral_data();
    const TorusPoint xn = toral_apply(x, n);

    // align sigma^n x to the denominator of x (iterated application only ever
    // shrinks denominators, so xn.den divides x.den)
    const U256& den = x.den();
    const U256 f = den.div_exact(xn.den());
    auto lift = [&](const U256& a_num, const U256& b_aligned) {
        // (b - a) mod den, lifted to the representative nearest zero
        U256 diff = U256::submod(b_aligned, a_num, den);
        const U256 half = den.shr1();
        if (half < diff) return SignedU256::from(den.sub(diff), true);
        return SignedU256::from(diff, false);
    };
    const SignedU256 ex = lift(x.num_x(), xn.num_x().mul(f));
    const SignedU256 ey = lift(x.num_y(), xn.num_y().mul(f));

    const std::int64_t detA = d.A[0][0] * d.A[1][1] - d.A[0][1] * d.A[1][0];
    auto An = matrix_power(d.A, n);
    std::array<std::array<I128, 2>, 2> B{{{An[0][0] - 1, An[0][1]}, {An[1][0], An[1][1] - 1}}};
    I128 det = det_power_minus_identity(An, detA, n);
    std::array<std::array<I128, 2>, 2> adj{{{B[1][1], -B[0][1]}, {-B[1][0], B[0][0]}}};
    if (det < 0) {
        det = -det;
        for (auto& row : adj)
            for (auto& v : row) v = -v;
    }
    const U256 detU = u256_from_i128_abs(det);
    if (den.bit_length() + detU.bit_length() > 250)
        throw BudgetError("closing period too wide for exact arithmetic");
    const U256 M = den.mul(detU);

    // delta solves (A^n - I) delta = -e_hat; p = x + delta mod 1
    auto scaled = [&](const SignedU256& e, I128 coef) {
        SignedU256 s = SignedU256::from(e.mag.mul_u128(
                                            coef < 0 ? static_cast<unsigned __int128>(-coef)
                                                     : static_cast<unsigned __int128>(coef)),
                                        e.neg != (coef < 0));
        return s;
    };
    const SignedU256 vx = scaled(ex, adj[0][0]).add(scaled(ey, adj[0][1])).negated();
    const SignedU256 vy = scaled(ex, adj[1][0]).add(scaled(ey, adj[1][1])).negated();

    const U256 pnx = U256::addmod(x.num_x().mul_u128(static_cast<unsigned __int128>(det)).mod(M),
                                  reduce_signed(vx, M), M);
    const U256 pny = U256::addmod(x.num_y().mul_u128(static_cast<unsigned __int128>(det)).mod(M),
                                  reduce_signed(vy, M), M);
    TorusPoint p = TorusPoint::from_fraction(pnx, pny, M);

    if (!(toral_apply(p, n) == p))
        throw CertificateError("constructed toral closing point is not exactly periodic");

    ShadowCertificate cert;
    cert.period = n;
    cert.base_distance = dist;
    cert.lambda_used = closing_.lambda;
    cert.C_used = closing_.C;
    cert.step_distances.reserve(static_cast<size_t>(n) + 1);
    TorusPoint xi = x, pi = p;
    for (std::int64_t i = 0; i <= n; ++i) {
        cert.step_distances.push_back(toral_metric(xi, pi));
        if (i < n) {
            xi = toral_apply(xi, 1);
            pi = toral_apply(pi, 1);
        }
    }
    cert.periodic_point = std::move(p);
    cert.bound_ok = cert.check(closing_.lambda, closing_.C);
    return cert;
}

double HyperbolicSystem::toral_coverage(const TorusPoint& x0, std::int64_t length,
                                        int grid) const {
    const int G = grid;
    std::vector<std::vector<std::pair<double, double>>> cells(static_cast<size_t>(G) * G);
    TorusPoint p = x0;
    for (std::int64_t i = 0; i <= length; ++i) {
        const double px = p.xd(), py = p.yd();
        int cx = std::min(G - 1, static_cast<int>(px * G));
        int cy = std::min(G - 1, static_cast<int>(py * G));
        cells[static_cast<size_t>(cx) * G + cy].emplace_back(px, py);
        if (i < length) p = toral_apply(p, 1);
    }
    auto circ = [](double a, double b) {
        double t = std::abs(a - b);
        return std::min(t, 1.0 - t);
    };
    double worst = 0.0;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) {
            const double tx = (i + 0.5) / G, ty = (j + 0.5) / G;
            double best = 1.0;
            for (int r = 0; r <= G / 2 + 1; ++r) {
                if (r > 0 && static_cast<double>(r - 1) / G > best) break;
                // cells at Chebyshev ring r around (i, j), torus-wrapped
                for (int di = -r; di <= r; ++di)
                    for (int dj = -r; dj <= r; ++dj) {
                        if (std::max(std::abs(di), std::abs(dj)) != r) continue;
                        const int ci = ((i + di) % G + G) % G;
                        const int cj = ((j + dj) % G + G) % G;
                        for (const auto& [px, py] : cells[static_cast<size_t>(ci) * G + cj])
                            best = std::min(best, std::max(circ(tx, px), circ(ty, py)));
                    }
            }
            worst = std::max(worst, best);
        }
    return worst;
}

DenseOrbit HyperbolicSystem::toral_dense_orbit(std::int64_t length, std::uint64_t seed,
                                               int grid) const {
    const ToralData& d = toral_data();
    std::mt19937_64 rng(seed);
    auto rand_num = [&](unsigned bits) {
        U256 r;
        r.w[0] = rng();
        if (bits > 64) r.w[1] = rng();
        if (bits < 64) r.w[0] &= (std::uint64_t(1) << bits) - 1;
        else if (bits < 128 && bits > 64)
            r.w[1] &= (std::uint64_t(1) << (bits - 64)) - 1;
        return r;
    };
    TorusPoint x0 = TorusPoint::from_fraction(rand_num(d.bits), rand_num(d.bits), U256::pow2(d.bits));
    DenseOrbit orbit;
    orbit.x0 = x0;
    orbit.length = length;
    orbit.coverage_radius = toral_coverage(x0, length, grid);
    orbit.description = "pseudo-random seed at " + std::to_string(d.bits) +
                        "-bit precision; coverage vs " + std::to_string(grid) + "x" +
                        std::to_string(grid) + " grid";
    return orbit;
}

}  // namespace livsic
