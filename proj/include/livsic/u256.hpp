#ifndef LIVSIC_U256_HPP
#define LIVSIC_U256_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "livsic/errors.hpp"

namespace livsic {

// Fixed-width 256-bit unsigned integer, little-endian limbs. Provides just
// enough arithmetic for exact rational torus coordinates: denominators up to
// 2^128 * |det(A^n - I)| plus intermediates. Overflow throws BudgetError,
// which surfaces as "this computation needs more exact-arithmetic width than
// the artifact budgets for".
struct U256 {
    std::array<std::uint64_t, 4> w{};

    U256() = default;

    static U256 from_u64(std::uint64_t v) {
        U256 r;
        r.w[0] = v;
        return r;
    }

    static U256 from_u128(unsigned __int128 v) {
        U256 r;
        r.w[0] = static_cast<std::uint64_t>(v);
        r.w[1] = static_cast<std::uint64_t>(v >> 64);
        return r;
    }

    static U256 pow2(unsigned k) {
        if (k >= 256) throw BudgetError("U256: 2^" + std::to_string(k) + " out of range");
        U256 r;
        r.w[k / 64] = std::uint64_t(1) << (k % 64);
        return r;
    }

    bool is_zero() const { return !(w[0] | w[1] | w[2] | w[3]); }

    int cmp(const U256& o) const {
        for (int i = 3; i >= 0; --i) {
            if (w[i] != o.w[i]) return w[i] < o.w[i] ? -1 : 1;
        }
        return 0;
    }
    bool operator==(const U256& o) const { return cmp(o) == 0; }
    bool operator<(const U256& o) const { return cmp(o) < 0; }
    bool operator<=(const U256& o) const { return cmp(o) <= 0; }

    bool bit(unsigned i) const { return (w[i / 64] >> (i % 64)) & 1; }

    unsigned bit_length() const {
        for (int i = 3; i >= 0; --i)
            if (w[i]) {
                unsigned b = 0;
                std::uint64_t v = w[i];
                while (v) {
                    v >>= 1;
                    ++b;
                }
                return static_cast<unsigned>(i) * 64 + b;
            }
        return 0;
    }

    U256 add(const U256& o) const {
        U256 r;
        unsigned __int128 carry = 0;
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 s = static_cast<unsigned __int128>(w[i]) + o.w[i] + carry;
            r.w[i] = static_cast<std::uint64_t>(s);
            carry = s >> 64;
        }
        if (carry) throw BudgetError("U256 addition overflow");
        return r;
    }

    // requires *this >= o
    U256 sub(const U256& o) const {
        U256 r;
        unsigned __int128 borrow = 0;
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 d = static_cast<unsigned __int128>(w[i]) -
                                  static_cast<unsigned __int128>(o.w[i]) - borrow;
            r.w[i] = static_cast<std::uint64_t>(d);
            borrow = (d >> 64) ? 1 : 0;
        }
        if (borrow) throw std::logic_error("U256 subtraction underflow");
        return r;
    }

    U256 shl1_unchecked() const {
        U256 r;
        std::uint64_t carry = 0;
        for (int i = 0; i < 4; ++i) {
            r.w[i] = (w[i] << 1) | carry;
            carry = w[i] >> 63;
        }
        return r;
    }

    U256 shl1() const {
        if (bit(255)) throw BudgetError("U256 shift overflow");
        return shl1_unchecked();
    }

    U256 shr1() const {
        U256 r;
        std::uint64_t carry = 0;
        for (int i = 3; i >= 0; --i) {
            r.w[i] = (w[i] >> 1) | (carry << 63);
            carry = w[i] & 1;
        }
        return r;
    }

    U256 mul_u64(std::uint64_t m) const {
        U256 r;
        unsigned __int128 carry = 0;
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 p = static_cast<unsigned __int128>(w[i]) * m + carry;
            r.w[i] = static_cast<std::uint64_t>(p);
            carry = p >> 64;
        }
        if (carry) throw BudgetError("U256 multiplication overflow");
        return r;
    }

    U256 mul_u128(unsigned __int128 m) const {
        const std::uint64_t lo = static_cast<std::uint64_t>(m);
        const std::uint64_t hi = static_cast<std::uint64_t>(m >> 64);
        U256 r = mul_u64(lo);
        if (hi) {
            U256 high_part = mul_u64(hi);
            if (high_part.w[3]) throw BudgetError("U256 multiplication overflow");
            U256 shifted;
            shifted.w[1] = high_part.w[0];
            shifted.w[2] = high_part.w[1];
            shifted.w[3] = high_part.w[2];
            r = r.add(shifted);
        }
        return r;
    }

    // General product via shift-and-add over the bits of m. Used on the cold
    // exact-metric path; hot paths multiply by small integers.
    U256 mul(const U256& m) const {
        U256 r;
        const unsigned bits = m.bit_length();
        for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
            r = r.shl1();
            if (m.bit(static_cast<unsigned>(i))) r = r.add(*this);
        }
        return r;
    }

    // Binary long division; den must be nonzero and below 2^255.
    static U256 divmod(const U256& num, const U256& den, U256& rem) {
        if (den.is_zero()) throw std::logic_error("U256 division by zero");
        if (den.bit(255)) throw BudgetError("U256 divisor too wide");
        U256 q, r;
        const unsigned bits = num.bit_length();
        for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
            r = r.shl1_unchecked();
            if (num.bit(static_cast<unsigned>(i))) r.w[0] |= 1;
            if (den <= r) {
                r = r.sub(den);
                q.w[static_cast<unsigned>(i) / 64] |= std::uint64_t(1) << (static_cast<unsigned>(i) % 64);
            }
        }
        rem = r;
        return q;
    }

    U256 mod(const U256& m) const {
        U256 r;
        (void)divmod(*this, m, r);
        return r;
    }

    U256 div_exact(const U256& d) const {
        U256 r;
        U256 q = divmod(*this, d, r);
        if (!r.is_zero()) throw std::logic_error("U256 div_exact with remainder");
        return q;
    }

    static U256 gcd(U256 a, U256 b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        unsigned shift = 0;
        while (!a.bit(0) && !b.bit(0)) {
            a = a.shr1();
            b = b.shr1();
            ++shift;
        }
        while (!a.bit(0)) a = a.shr1();
        for (;;) {
            while (!b.bit(0)) b = b.shr1();
            if (b < a) std::swap(a, b);
            b = b.sub(a);
            if (b.is_zero()) break;
        }
        while (shift--) a = a.shl1();
        return a;
    }

    // a * m mod M, requiring a < M < 2^255.
    static U256 mulmod(const U256& a, const U256& m, const U256& M) {
        U256 r;
        const unsigned bits = m.bit_length();
        for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
            r = r.shl1_unchecked();
            if (M <= r) r = r.sub(M);
            if (m.bit(static_cast<unsigned>(i))) {
                r = r.add(a);
                if (M <= r) r = r.sub(M);
            }
        }
        return r;
    }

    static U256 addmod(const U256& a, const U256& b, const U256& M) {
        U256 r = a.add(b);
        if (M <= r) r = r.sub(M);
        return r;
    }

    static U256 submod(const U256& a, const U256& b, const U256& M) {
        return b <= a ? a.sub(b) : a.add(M).sub(b);
    }

    double to_double() const {
        double r = 0.0;
        for (int i = 3; i >= 0; --i) r = r * 18446744073709551616.0 + static_cast<double>(w[i]);
        return r;
    }

    std::string to_decimal() const {
        if (is_zero()) return "0";
        U256 v = *this;
        std::string digits;
        while (!v.is_zero()) {
            unsigned __int128 rem = 0;
            U256 q;
            for (int i = 3; i >= 0; --i) {
                unsigned __int128 cur = (rem << 64) | v.w[i];
                q.w[i] = static_cast<std::uint64_t>(cur / 10);
                rem = cur % 10;
            }
            digits.push_back(static_cast<char>('0' + static_cast<int>(rem)));
            v = q;
        }
        return std::string(digits.rbegin(), digits.rend());
    }

    static U256 from_decimal(const std::string& s) {
        if (s.empty()) throw ConfigError("empty integer literal");
        U256 v;
        for (char c : s) {
            if (c < '0' || c > '9') throw ConfigError("bad digit in integer literal: " + s);
            v = v.mul_u64(10).add(from_u64(static_cast<std::uint64_t>(c - '0')));
        }
        return v;
    }
};

}  // namespace livsic

#endif
