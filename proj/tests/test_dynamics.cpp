#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "livsic/dynamics.hpp"
#include "livsic/u256.hpp"

using namespace livsic;

namespace {

HyperbolicSystem cat_map(unsigned bits = 128) {
    return HyperbolicSystem::toral({{{2, 1}, {1, 1}}}, bits);
}

HyperbolicSystem golden_mean_shift() {
    // no consecutive 1s
    return HyperbolicSystem::sft(2, {{1, 1}, {1, 0}});
}

}  // namespace

TEST_CASE("u256 arithmetic spot checks") {
    U256 a = U256::from_decimal("340282366920938463463374607431768211456");  // 2^128
    CHECK(a == U256::pow2(128));
    CHECK(a.to_decimal() == "340282366920938463463374607431768211456");
    U256 b = U256::from_u64(5);
    U256 rem;
    U256 q = U256::divmod(a, b, rem);
    CHECK(q.to_decimal() == "68056473384187692692674921486353642291");
    CHECK(rem == U256::from_u64(1));
    CHECK(U256::gcd(U256::from_u64(12), U256::from_u64(18)) == U256::from_u64(6));
    CHECK(U256::mulmod(U256::from_u64(7), U256::from_u64(9), U256::from_u64(10)) ==
          U256::from_u64(3));
    CHECK(a.mul_u64(3).to_decimal() == "1020847100762815390390123822295304634368");
    // general product: (2^128) * (2^64 + 1)
    CHECK(a.mul(U256::pow2(64).add(U256::from_u64(1))).bit_length() == 193u);
}

TEST_CASE("symbol point canonical form and shift") {
    // repetitions reduce to the primitive period
    SymbolPoint p = SymbolPoint::periodic({0, 1, 0, 1});
    CHECK(p.least_period() == 2);
    CHECK(p == SymbolPoint::periodic({0, 1}));
    CHECK(p.symbol_at(0) == 0);
    CHECK(p.symbol_at(1) == 1);
    CHECK(p.symbol_at(-1) == 1);

    // shifting a periodic sequence rotates it
    CHECK(p.shifted(1) == SymbolPoint::periodic({1, 0}));
    CHECK(p.shifted(2) == p);

    // representation-independent equality: same sequence, different split
    SymbolPoint a = SymbolPoint::from_parts({0}, {1, 1}, {0}, 0);
    SymbolPoint b = SymbolPoint::from_parts({0}, {0, 1, 1, 0}, {0}, -1);
    CHECK(a == b);
    CHECK(a.symbol_at(0) == 1);
    CHECK(a.symbol_at(1) == 1);
    CHECK(a.symbol_at(2) == 0);
    CHECK(a.symbol_at(-1) == 0);

    // mixed tails normalize the split deterministically
    SymbolPoint m1 = SymbolPoint::from_parts({0}, {}, {1}, 4);
    SymbolPoint m2 = SymbolPoint::from_parts({0}, {0, 0, 1, 1}, {1}, 2);
    CHECK(m1 == m2);
}

TEST_CASE("shift inverse roundtrip is exact") {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);
    SymbolPoint x = SymbolPoint::from_parts({0}, {1, 0, 0, 1, 1}, {1, 0}, -2);
    SystemPoint sp = x;
    for (std::int64_t n : {1, 7, 10000}) {
        SystemPoint fwd = shift.apply(sp, n);
        CHECK(point_equal(shift.apply(fwd, -n), sp));
    }

    HyperbolicSystem cat = cat_map();
    std::mt19937_64 rng(5);
    SystemPoint t = cat.random_point(rng);
    for (std::int64_t n : {1, 13, 10000}) {
        SystemPoint fwd = cat.apply(t, n);
        CHECK(point_equal(cat.apply(fwd, -n), t));
    }
}

TEST_CASE("sft metric") {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);
    SymbolPoint zero = SymbolPoint::periodic({0});
    CHECK(shift.metric(zero, zero) == 0.0);

    // agree on [-3,3], differ first at index 4
    SymbolPoint x = SymbolPoint::from_parts({0}, {1, 1, 1, 0, 1, 1, 1, 0, 1}, {0}, -4);
    SymbolPoint y = SymbolPoint::from_parts({0}, {1, 1, 1, 0, 1, 1, 1, 0, 0}, {0}, -4);
    CHECK(shift.metric(x, y) == std::ldexp(1.0, -4));

    // centers differ: distance capped at 1
    SymbolPoint one = SymbolPoint::periodic({1});
    CHECK(shift.metric(zero, one) == 1.0);

    // ultrametric triangle inequality on random triples
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        SystemPoint a = shift.random_point(rng);
        SystemPoint b = shift.random_point(rng);
        SystemPoint c = shift.random_point(rng);
        const double ab = shift.metric(a, b);
        const double bc = shift.metric(b, c);
        const double ac = shift.metric(a, c);
        CHECK(ab == shift.metric(b, a));
        CHECK(ac <= std::max(ab, bc));
    }
}

TEST_CASE("torus metric and apply") {
    HyperbolicSystem cat = cat_map();
    TorusPoint origin = TorusPoint::from_fraction(U256::from_u64(0), U256::from_u64(0),
                                                  U256::from_u64(1));
    CHECK(cat.metric(origin, origin) == 0.0);
    CHECK(point_equal(cat.apply(origin, 5), SystemPoint{origin}));

    // (1/4, 0) -> (1/2, 1/4)
    TorusPoint q = TorusPoint::from_fraction(U256::from_u64(1), U256::from_u64(0),
                                             U256::from_u64(4));
    TorusPoint expect = TorusPoint::from_fraction(U256::from_u64(2), U256::from_u64(1),
                                                  U256::from_u64(4));
    CHECK(point_equal(cat.apply(q, 1), SystemPoint{expect}));

    // circle wrap: (0,0) vs (0.75, 0) is 0.25 away
    TorusPoint w = TorusPoint::from_fraction(U256::from_u64(3), U256::from_u64(0),
                                             U256::from_u64(4));
    CHECK(cat.metric(origin, w) == 0.25);

    // metric between points with different denominators stays exact
    TorusPoint fifth = TorusPoint::from_fraction(U256::from_u64(1), U256::from_u64(0),
                                                 U256::from_u64(5));
    CHECK(cat.metric(q, fifth) == doctest::Approx(0.05).epsilon(1e-15));

    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        SystemPoint a = cat.random_point(rng);
        SystemPoint b = cat.random_point(rng);
        SystemPoint c = cat.random_point(rng);
        CHECK(cat.metric(a, b) == cat.metric(b, a));
        CHECK(cat.metric(a, c) <= cat.metric(a, b) + cat.metric(b, c) + 1e-15);
    }
}

TEST_CASE("periodic point enumeration matches counting oracles") {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);
    auto pts2 = shift.periodic_points(2);
    CHECK(pts2.size() == 4);  // 00, 01, 10, 11 repetitions

    for (int n = 1; n <= 12; ++n) {
        auto pts = shift.periodic_points(n);
        CHECK(static_cast<std::int64_t>(pts.size()) == (std::int64_t(1) << n));
        CHECK(shift.periodic_point_count(n) == (std::int64_t(1) << n));
        // distinctness and exact periodicity
        std::set<SymbolPoint> uniq;
        for (const auto& p : pts) {
            uniq.insert(std::get<SymbolPoint>(p));
            CHECK(point_equal(shift.apply(p, n), p));
        }
        CHECK(uniq.size() == pts.size());
    }

    // golden-mean shift: counts are the Lucas numbers (trace of M^n)
    HyperbolicSystem gm = golden_mean_shift();
    for (int n = 1; n <= 10; ++n) {
        auto pts = gm.periodic_points(n);
        CHECK(static_cast<std::int64_t>(pts.size()) == gm.periodic_point_count(n));
        for (const auto& p : pts) {
            CHECK(point_equal(gm.apply(p, n), p));
            CHECK(gm.valid_point(p));
        }
    }
    CHECK(gm.periodic_point_count(1) == 1);
    CHECK(gm.periodic_point_count(2) == 3);
    CHECK(gm.periodic_point_count(3) == 4);

    HyperbolicSystem cat = cat_map();
    CHECK(cat.periodic_point_count(1) == 1);   // |det(A - I)| = 1
    CHECK(cat.periodic_point_count(2) == 5);   // |det(A^2 - I)| = 5
    auto cat1 = cat.periodic_points(1);
    CHECK(cat1.size() == 1);
    CHECK(std::get<TorusPoint>(cat1[0]).den() == U256::from_u64(1));
    for (int n = 1; n <= 8; ++n) {
        auto pts = cat.periodic_points(n);
        CHECK(static_cast<std::int64_t>(pts.size()) == cat.periodic_point_count(n));
        for (const auto& p : pts) CHECK(point_equal(cat.apply(p, n), p));
    }
}

TEST_CASE("find_returns") {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);
    SystemPoint per = SymbolPoint::periodic({0, 1, 1});
    auto ks = shift.find_returns(per, 1, 10, 0.5);
    CHECK(ks == std::vector<std::int64_t>{3, 6, 9});

    SystemPoint fixed = SymbolPoint::periodic({0});
    auto all = shift.find_returns(fixed, 1, 10, 1e-9);
    CHECK(all.size() == 10);

    HyperbolicSystem cat = cat_map();
    std::mt19937_64 rng(41);
    SystemPoint x = cat.random_point(rng);
    auto rets = cat.find_returns(x, 1, 5000, 0.01);
    CHECK(!rets.empty());
    // each returned k verified by direct metric evaluation
    for (std::int64_t k : rets) CHECK(cat.metric(x, cat.apply(x, k)) < 0.01);
    // and no missed k (scan is its own oracle)
    std::int64_t found = 0;
    SystemPoint y = x;
    for (std::int64_t k = 1; k <= 5000; ++k) {
        y = cat.apply(y, 1);
        if (cat.metric(x, y) < 0.01) ++found;
    }
    CHECK(found == static_cast<std::int64_t>(rets.size()));
}

TEST_CASE("closing certificates on the full shift") {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);

    // already periodic: shadow is the point itself, all distances zero
    SystemPoint per = SymbolPoint::periodic({0, 1});
    auto cert = shift.close_orbit(per, 2);
    CHECK(point_equal(cert.periodic_point, per));
    for (double d : cert.step_distances) CHECK(d == 0.0);
    CHECK(cert.bound_ok);

    // 100 random near-returns: bound holds with C = 1/2, lambda = ln 2
    std::mt19937_64 rng(47);
    int certified = 0;
    while (certified < 100) {
        SystemPoint x = shift.random_point(rng);
        for (std::int64_t k : shift.find_returns(x, 1, 200, 0.25)) {
            auto c = shift.close_orbit(x, k);
            CHECK(c.bound_ok);
            CHECK(point_equal(shift.apply(c.periodic_point, k), c.periodic_point));
            if (++certified >= 100) break;
        }
    }
}

TEST_CASE("closing certificates on the cat map") {
    HyperbolicSystem cat = cat_map();
    std::mt19937_64 rng(53);
    int certified = 0;
    while (certified < 100) {
        SystemPoint x = cat.random_point(rng);
        for (std::int64_t k : cat.find_returns(x, 1, 60, cat.closing().delta0)) {
            auto c = cat.close_orbit(x, k);
            CHECK(c.bound_ok);
            CHECK(point_equal(cat.apply(c.periodic_point, k), c.periodic_point));
            if (++certified >= 100) break;
        }
    }
}

TEST_CASE("close_orbit error paths") {
    HyperbolicSystem cat = cat_map();
    // a point far from returning in 1 step
    TorusPoint x = TorusPoint::from_fraction(U256::from_u64(1), U256::from_u64(3),
                                             U256::from_u64(7));
    if (cat.metric(x, cat.apply(x, 1)) > cat.closing().delta0)
        CHECK_THROWS_AS((void)cat.close_orbit(SystemPoint{x}, 1), TooFarError);

    // absurd closing constants make recomputation fail loudly
    HyperbolicSystem bad = cat_map();
    bad.override_closing({bad.closing().delta0, bad.closing().lambda * 40.0, 1e-9});
    std::mt19937_64 rng(59);
    bool threw = false;
    for (int tries = 0; tries < 50 && !threw; ++tries) {
        SystemPoint x = bad.random_point(rng);
        for (std::int64_t k : bad.find_returns(x, 2, 40, bad.closing().delta0)) {
            try {
                (void)bad.close_orbit(x, k);
            } catch (const CertificateError&) {
                threw = true;
                break;
            }
        }
    }
    CHECK(threw);
}

TEST_CASE("dense orbit coverage") {
    HyperbolicSystem shift = HyperbolicSystem::full_shift(2);
    // enumeration of all words of length 9 fits in 2^13 and covers every
    // radius-4 window, so the period-8 grid sits within 2^-4
    DenseOrbit d = shift.dense_orbit(1 << 13, 1);
    CHECK(d.coverage_radius <= std::ldexp(1.0, -4));
    CHECK(shift.valid_point(d.x0));

    // degenerate case: a single-point orbit still reports a radius
    DenseOrbit single = shift.dense_orbit(1, 1);
    CHECK(single.coverage_radius <= 1.0);
    CHECK(single.coverage_radius >= 0.25);

    HyperbolicSystem cat = cat_map();
    DenseOrbit t = cat.dense_orbit(1 << 16, 7, 64);
    CHECK(t.coverage_radius <= 0.05);
}

TEST_CASE("golden mean shift dense orbit and closing") {
    HyperbolicSystem gm = golden_mean_shift();
    DenseOrbit d = gm.dense_orbit(1 << 12, 1);
    CHECK(gm.valid_point(d.x0));
    CHECK(d.coverage_radius < 0.5);

    std::mt19937_64 rng(61);
    int certified = 0;
    while (certified < 50) {
        SystemPoint x = gm.random_point(rng);
        CHECK(gm.valid_point(x));
        for (std::int64_t k : gm.find_returns(x, 1, 300, 0.25)) {
            auto c = gm.close_orbit(x, k);
            CHECK(c.bound_ok);
            CHECK(gm.valid_point(c.periodic_point));
            if (++certified >= 50) break;
        }
    }
}
