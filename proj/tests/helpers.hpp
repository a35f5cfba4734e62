#ifndef LIVSIC_TEST_HELPERS_HPP
#define LIVSIC_TEST_HELPERS_HPP

#include <cmath>
#include <random>

#include "livsic/ring.hpp"

namespace livsic::testing {

inline RingElement random_matrix(std::mt19937_64& rng, int dim, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    RingElement m = RingElement::zero(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m.at(r, c) = u(rng);
    return m;
}

// Random invertible matrix with condition estimate norm(a)*norm(inv(a))
// below cond_bound. Rejection sampling; dim stays small in tests.
inline RingElement random_well_conditioned(std::mt19937_64& rng, int dim,
                                           double cond_bound = 1e6) {
    for (;;) {
        RingElement a = random_matrix(rng, dim);
        try {
            RingElement inv = inverse(a);
            if (a.norm() * inv.norm() <= cond_bound) return a;
        } catch (const SingularError&) {
        }
    }
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline double rel_gap(const RingElement& a, const RingElement& b) {
    const double denom = a.norm() > 1.0 ? a.norm() : 1.0;
    return (a - b).norm() / denom;
}

}  // namespace livsic::testing

#endif
