#ifndef LIVSIC_RING_HPP
#define LIVSIC_RING_HPP

#include <cstddef>
#include <vector>

#include "livsic/errors.hpp"

namespace livsic {

// Numerical tolerances for inversion. These are configuration, not theory:
// pivot_rel scales the smallest acceptable pivot by the element norm,
// inverse_check_rel bounds the residual of a*inv(a) against the identity.
struct RingOptions {
    double pivot_rel = 1e-12;
    double inverse_check_rel = 1e-10;
};

// An element of the ring of n x n real matrices under the max-absolute-row-sum
// norm (n = 1 recovers the scalar ring). The norm is submultiplicative, which
// is all the surrounding machinery assumes. Values are immutable in practice:
// every operation returns a fresh element.
class RingElement {
public:
    RingElement() = default;

    static RingElement zero(int dim);
    static RingElement identity(int dim);
    static RingElement scalar(double v);  // dim-1 element
    static RingElement from_rows(const std::vector<std::vector<double>>& rows);

    int dim() const { return dim_; }
    bool valid() const { return dim_ > 0; }

    double at(int r, int c) const { return data_[static_cast<size_t>(r) * dim_ + c]; }
    double& at(int r, int c) { return data_[static_cast<size_t>(r) * dim_ + c]; }

    // max absolute row sum
    double norm() const;

    RingElement scaled(double s) const;

    friend RingElement operator*(const RingElement& a, const RingElement& b);
    friend RingElement operator+(const RingElement& a, const RingElement& b);
    friend RingElement operator-(const RingElement& a, const RingElement& b);
    friend bool operator==(const RingElement& a, const RingElement& b);

private:
    int dim_ = 0;
    std::vector<double> data_;
};

// Pivoted Gauss-Jordan inverse. Throws SingularError when a pivot falls at or
// below pivot_rel * norm(a), or when the residual check a*inv - e fails.
RingElement inverse(const RingElement& a, const RingOptions& opts = {});

// Power-series exponential, summed until the term norm drops below
// 1e-16 times the partial-sum norm. Always invertible: inverse is exp(-m).
RingElement exp_element(const RingElement& m);

// Metric on invertible elements: max(norm(f - h), norm(inv(f) - inv(h))).
double group_dist(const RingElement& f, const RingElement& h, const RingOptions& opts = {});

// Bound on the distortion of g as a group element: max(norm(g), norm(inv(g))).
double distortion_bound(const RingElement& g, const RingOptions& opts = {});

inline double norm_dist(const RingElement& a, const RingElement& b) { return (a - b).norm(); }

}  // namespace livsic

#endif
