#ifndef LIVSIC_TEST_SYNTHETIC_HPP
#define LIVSIC_TEST_SYNTHETIC_HPP

#include <memory>
#include <random>
#include <string>
#include <unordered_map>

#include "helpers.hpp"
#include "livsic/cocycle.hpp"

namespace livsic::testing {

inline void admissible_words(const HyperbolicSystem& sys, int len,
                             const std::function<void(const std::string&)>& sink) {
    std::string word(static_cast<size_t>(len), '0');
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == len) {
            sink(word);
            return;
        }
        for (int s = 0; s < sys.alphabet(); ++s) {
            if (pos > 0 && !sys.edge(word[static_cast<size_t>(pos - 1)] - '0', s)) continue;
            word[static_cast<size_t>(pos)] = static_cast<char>('0' + s);
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
}

// t(x) = exp(M(window)) with seeded matrices of norm <= scale: an invertible
// window transfer map whose extremal norms are known by construction
inline std::shared_ptr<WindowGenerator> random_exp_window_map(const HyperbolicSystem& sys,
                                                              int radius, int dim,
                                                              std::uint64_t seed,
                                                              double scale = 0.4) {
    std::mt19937_64 rng(seed);
    std::unordered_map<std::string, RingElement> table;
    admissible_words(sys, 2 * radius + 1, [&](const std::string& w) {
        table.emplace(w, exp_element(random_matrix(rng, dim, scale / dim)));
    });
    return std::make_shared<WindowGenerator>(radius, std::move(table), 1.0);
}

// window table for a(x) = t(sigma x) t(x)^-1 where t is a window map of
// radius w; a depends on the radius-(w+1) window
inline std::unordered_map<std::string, RingElement> coboundary_window_table(
    const HyperbolicSystem& sys, const WindowGenerator& t) {
    const int w = t.radius();
    const size_t tl = static_cast<size_t>(2 * w + 1);
    std::unordered_map<std::string, RingElement> table;
    admissible_words(sys, 2 * (w + 1) + 1, [&](const std::string& u) {
        const RingElement tx = t.table().at(u.substr(1, tl));
        const RingElement tsx = t.table().at(u.substr(2, tl));
        table.emplace(u, tsx * inverse(tx));
    });
    return table;
}

inline std::shared_ptr<WindowGenerator> coboundary_window_generator(const HyperbolicSystem& sys,
                                                                    const WindowGenerator& t) {
    return std::make_shared<WindowGenerator>(t.radius() + 1, coboundary_window_table(sys, t),
                                             t.alpha());
}

// constant generator as a radius-0 window table (SFT)
inline std::shared_ptr<WindowGenerator> constant_window_generator(const HyperbolicSystem& sys,
                                                                  const RingElement& value) {
    std::unordered_map<std::string, RingElement> table;
    for (int s = 0; s < sys.alphabet(); ++s)
        table.emplace(std::string(1, static_cast<char>('0' + s)), value);
    return std::make_shared<WindowGenerator>(0, std::move(table), 1.0);
}

// the scalar generator taking 2 on the 0-cylinder and 3 elsewhere
inline std::shared_ptr<WindowGenerator> two_three_generator(const HyperbolicSystem& sys) {
    std::unordered_map<std::string, RingElement> table;
    table.emplace("0", RingElement::scalar(2.0));
    for (int s = 1; s < sys.alphabet(); ++s)
        table.emplace(std::string(1, static_cast<char>('0' + s)), RingElement::scalar(3.0));
    return std::make_shared<WindowGenerator>(0, std::move(table), 1.0);
}

// extremal norms of a window transfer map (oracle for coboundary bounds)
inline std::pair<double, double> window_extremal_norms(const WindowGenerator& t) {
    double max_norm = 0.0, max_inv_norm = 0.0;
    for (const auto& [w, v] : t.table()) {
        max_norm = std::max(max_norm, v.norm());
        max_inv_norm = std::max(max_inv_norm, inverse(v).norm());
    }
    return {max_norm, max_inv_norm};
}

}  // namespace livsic::testing

#endif
