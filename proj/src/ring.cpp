#include "livsic/ring.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace livsic {

RingElement RingElement::zero(int dim) {
    if (dim < 1) throw DimensionError("ring dimension must be >= 1");
    RingElement e;
    e.dim_ = dim;
    e.data_.assign(static_cast<size_t>(dim) * dim, 0.0);
    return e;
}

RingElement RingElement::identity(int dim) {
    RingElement e = zero(dim);
    for (int i = 0; i < dim; ++i) e.at(i, i) = 1.0;
    return e;
}

RingElement RingElement::scalar(double v) {
    RingElement e = zero(1);
    e.at(0, 0) = v;
    return e;
}

RingElement RingElement::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    RingElement e = zero(n);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[r].size()) != n)
            throw DimensionError("matrix literal is not square");
        for (int c = 0; c < n; ++c) e.at(r, c) = rows[r][c];
    }
    return e;
}

double RingElement::norm() const {
    double best = 0.0;
    for (int r = 0; r < dim_; ++r) {
        double row = 0.0;
        for (int c = 0; c < dim_; ++c) row += std::abs(at(r, c));
        if (row > best) best = row;
    }
    return best;
}

RingElement RingElement::scaled(double s) const {
    RingElement out = *this;
    for (double& v : out.data_) v *= s;
    return out;
}

static void check_same_dim(const RingElement& a, const RingElement& b) {
    if (a.dim() != b.dim())
        throw DimensionError("ring elements of dimension " + std::to_string(a.dim()) +
                             " and " + std::to_string(b.dim()) + " cannot be combined");
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    check_same_dim(a, b);
    const int n = a.dim();
    RingElement out = RingElement::zero(n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) {
            const double arc = a.at(r, k);
            if (arc == 0.0) continue;
            for (int c = 0; c < n; ++c) out.at(r, c) += arc * b.at(k, c);
        }
    return out;
}

RingElement operator+(const RingElement& a, const RingElement& b) {
    check_same_dim(a, b);
    RingElement out = a;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) out.at(r, c) += b.at(r, c);
    return out;
}

RingElement operator-(const RingElement& a, const RingElement& b) {
    check_same_dim(a, b);
    RingElement out = a;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) out.at(r, c) -= b.at(r, c);
    return out;
}

bool operator==(const RingElement& a, const RingElement& b) {
    if (a.dim() != b.dim()) return false;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c)
            if (a.at(r, c) != b.at(r, c)) return false;
    return true;
}

RingElement inverse(const RingElement& a, const RingOptions& opts) {
    if (!a.valid()) throw DimensionError("inverse of uninitialized element");
    const int n = a.dim();
    const double pivot_floor = opts.pivot_rel * a.norm();

    // Gauss-Jordan with partial pivoting on an [A | I] tableau.
    std::vector<double> m(static_cast<size_t>(n) * 2 * n, 0.0);
    auto M = [&](int r, int c) -> double& { return m[static_cast<size_t>(r) * 2 * n + c]; };
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) M(r, c) = a.at(r, c);
        M(r, n + r) = 1.0;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(M(r, col)) > std::abs(M(piv, col))) piv = r;
        if (std::abs(M(piv, col)) <= pivot_floor)
            throw SingularError("pivot " + std::to_string(M(piv, col)) +
                                " at column " + std::to_string(col) + " below threshold");
        if (piv != col)
            for (int c = 0; c < 2 * n; ++c) std::swap(M(piv, c), M(col, c));
        const double d = M(col, col);
        for (int c = 0; c < 2 * n; ++c) M(col, c) /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = M(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < 2 * n; ++c) M(r, c) -= f * M(col, c);
        }
    }
    RingElement inv = RingElement::zero(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv.at(r, c) = M(r, n + c);

    const RingElement e = RingElement::identity(n);
    const double budget = opts.inverse_check_rel * (1.0 + a.norm() * inv.norm());
    if ((a * inv - e).norm() > budget || (inv * a - e).norm() > budget)
        throw SingularError("inverse residual exceeds tolerance (ill-conditioned element)");
    return inv;
}

RingElement exp_element(const RingElement& m) {
    if (!m.valid()) throw DimensionError("exp of uninitialized element");
    RingElement sum = RingElement::identity(m.dim());
    RingElement term = RingElement::identity(m.dim());
    for (int k = 1; k <= 10000; ++k) {
        term = (term * m).scaled(1.0 / k);
        sum = sum + term;
        if (term.norm() < 1e-16 * sum.norm()) return sum;
    }
    throw std::runtime_error("exp_element series failed to converge");
}

double group_dist(const RingElement& f, const RingElement& h, const RingOptions& opts) {
    const double direct = (f - h).norm();
    const double inv_gap = (inverse(f, opts) - inverse(h, opts)).norm();
    return direct > inv_gap ? direct : inv_gap;
}

double distortion_bound(const RingElement& g, const RingOptions& opts) {
    const double n1 = g.norm();
    const double n2 = inverse(g, opts).norm();
    return n1 > n2 ? n1 : n2;
}

}  // namespace livsic
