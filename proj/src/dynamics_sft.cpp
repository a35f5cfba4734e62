#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "livsic/dynamics.hpp"

namespace livsic {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// shrink a tail word to its primitive period (the anchored periodic extension
// is unchanged because the primitive word divides the original)
void reduce_primitive(Word& w) {
    const std::int64_t n = static_cast<std::int64_t>(w.size());
    for (std::int64_t q = 1; q < n; ++q) {
        if (n % q != 0) continue;
        bool periodic = true;
        for (std::int64_t i = q; i < n && periodic; ++i) periodic = (w[i] == w[i % q]);
        if (periodic) {
            w.resize(static_cast<size_t>(q));
            return;
        }
    }
}

}  // namespace

void SymbolPoint::canonicalize() {
    if (left_.empty() || right_.empty())
        throw std::logic_error("SymbolPoint tails must be nonempty");
    reduce_primitive(left_);
    reduce_primitive(right_);

    // absorb core symbols that continue a tail's periodic pattern
    while (!core_.empty() && core_.front() == left_[0]) {
        std::rotate(left_.begin(), left_.begin() + 1, left_.end());
        core_.erase(core_.begin());
        ++core_start_;
    }
    while (!core_.empty() && core_.back() == right_.back()) {
        std::rotate(right_.begin(), right_.end() - 1, right_.end());
        core_.pop_back();
    }
    if (!core_.empty()) return;

    const std::int64_t q = static_cast<std::int64_t>(left_.size());
    const std::int64_t r = static_cast<std::int64_t>(right_.size());
    if (q == r && left_ == right_) {
        // fully periodic sequence: re-anchor the tail word at coordinate 0
        Word anchored(static_cast<size_t>(q));
        for (std::int64_t j = 0; j < q; ++j)
            anchored[static_cast<size_t>(j)] = left_[static_cast<size_t>(floor_mod(j - core_start_, q))];
        left_ = right_ = anchored;
        core_start_ = 0;
        return;
    }
    // mixed tails: slide the split left to its canonical minimum
    std::int64_t guard = q * r + 2;
    while (left_.back() == right_.back()) {
        if (--guard < 0) throw std::logic_error("SymbolPoint split normalization diverged");
        std::rotate(left_.begin(), left_.end() - 1, left_.end());
        std::rotate(right_.begin(), right_.end() - 1, right_.end());
        --core_start_;
    }
}

SymbolPoint SymbolPoint::periodic(const Word& cycle) {
    if (cycle.empty()) throw std::logic_error("periodic point needs a nonempty cycle");
    SymbolPoint p;
    p.left_ = cycle;
    p.right_ = cycle;
    p.core_start_ = 0;
    p.canonicalize();
    return p;
}

SymbolPoint SymbolPoint::from_parts(Word left, Word core, Word right, std::int64_t core_start) {
    SymbolPoint p;
    p.left_ = std::move(left);
    p.core_ = std::move(core);
    p.right_ = std::move(right);
    p.core_start_ = core_start;
    p.canonicalize();
    return p;
}

int SymbolPoint::symbol_at(std::int64_t i) const {
    if (i < core_start_)
        return left_[static_cast<size_t>(floor_mod(i - core_start_, static_cast<std::int64_t>(left_.size())))];
    const std::int64_t e = core_end();
    if (i < e) return core_[static_cast<size_t>(i - core_start_)];
    return right_[static_cast<size_t>(floor_mod(i - e, static_cast<std::int64_t>(right_.size())))];
}

SymbolPoint SymbolPoint::shifted(std::int64_t k) const {
    SymbolPoint p = *this;
    if (is_periodic_sequence()) {
        const std::int64_t q = least_period();
        const std::int64_t rot = floor_mod(k, q);
        std::rotate(p.left_.begin(), p.left_.begin() + rot, p.left_.end());
        p.right_ = p.left_;
        return p;
    }
    p.core_start_ -= k;
    return p;
}

bool SymbolPoint::is_periodic_sequence() const {
    return core_.empty() && left_ == right_ && core_start_ == 0;
}

std::int64_t SymbolPoint::least_period() const {
    if (!is_periodic_sequence())
        throw std::logic_error("least_period on a non-periodic sequence");
    return static_cast<std::int64_t>(left_.size());
}

bool SymbolPoint::operator==(const SymbolPoint& o) const {
    return core_start_ == o.core_start_ && core_ == o.core_ && left_ == o.left_ &&
           right_ == o.right_;
}

bool SymbolPoint::operator<(const SymbolPoint& o) const {
    if (core_start_ != o.core_start_) return core_start_ < o.core_start_;
    if (core_ != o.core_) return core_ < o.core_;
    if (left_ != o.left_) return left_ < o.left_;
    return right_ < o.right_;
}

// ---------------------------------------------------------------------------
// SFT system operations
// ---------------------------------------------------------------------------

double HyperbolicSystem::sft_metric(const SymbolPoint& x, const SymbolPoint& y) const {
    if (x == y) return 0.0;
    // a mismatch exists because canonical forms differ; scan outward for it
    const std::int64_t horizon =
        std::int64_t(16) + std::abs(x.core_start()) + std::abs(y.core_start()) +
        static_cast<std::int64_t>(x.core().size() + y.core().size()) +
        static_cast<std::int64_t>((x.left().size() * y.left().size()) +
                                  (x.right().size() * y.right().size()));
    for (std::int64_t m = 0; m <= horizon; ++m) {
        if (x.symbol_at(m) != y.symbol_at(m) || x.symbol_at(-m) != y.symbol_at(-m))
            return std::ldexp(1.0, static_cast<int>(-std::min(m, std::int64_t(1073))));
    }
    throw std::logic_error("distinct symbol points with no mismatch in horizon");
}

std::vector<SystemPoint> HyperbolicSystem::sft_periodic_points(int n, std::int64_t budget) const {
    const SftData& d = sft_data();
    std::vector<SystemPoint> out;
    Word word(static_cast<size_t>(n));
    // lexicographic DFS over admissible cyclic words of length n
    std::int64_t produced = 0;
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            if (d.adj[word[static_cast<size_t>(n - 1)]][word[0]]) {
                if (++produced > budget) throw BudgetError("periodic point budget exceeded");
                out.push_back(SymbolPoint::periodic(word));
            }
            return;
        }
        for (int s = 0; s < d.k; ++s) {
            if (pos > 0 && !d.adj[word[static_cast<size_t>(pos - 1)]][s]) continue;
            word[static_cast<size_t>(pos)] = static_cast<std::uint8_t>(s);
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

ShadowCertificate HyperbolicSystem::sft_close_orbit(const SymbolPoint& x, std::int64_t n,
                                                    double dist) const {
    const SftData& d = sft_data();
    Word word(static_cast<size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        word[static_cast<size_t>(i)] = static_cast<std::uint8_t>(x.symbol_at(i));
    // dist <= 1/2 gives x_n = x_0, so the wrap pair (x_{n-1}, x_0) is the
    // admissible pair (x_{n-1}, x_n) seen in x itself
    if (!d.adj[word[static_cast<size_t>(n - 1)]][word[0]])
        throw CertificateError("wrap pair inadmissible; near-return too coarse");
    SymbolPoint p = SymbolPoint::periodic(word);

    ShadowCertificate cert;
    cert.period = n;
    cert.base_distance = dist;
    cert.lambda_used = closing_.lambda;
    cert.C_used = closing_.C;
    cert.step_distances.reserve(static_cast<size_t>(n) + 1);
    SymbolPoint xi = x;
    SymbolPoint pi = p;
    for (std::int64_t i = 0; i <= n; ++i) {
        cert.step_distances.push_back(sft_metric(xi, pi));
        if (i < n) {
            xi = xi.shifted(1);
            pi = pi.shifted(1);
        }
    }
    cert.periodic_point = std::move(p);
    cert.bound_ok = cert.check(closing_.lambda, closing_.C);
    return cert;
}

SymbolPoint HyperbolicSystem::sft_random_point(std::mt19937_64& rng, int core_radius) const {
    const SftData& d = sft_data();
    std::uniform_int_distribution<int> pick(0, d.k - 1);
    const int len = 2 * core_radius + 1;
    Word core(static_cast<size_t>(len));
    core[0] = static_cast<std::uint8_t>(pick(rng));
    for (int i = 1; i < len; ++i) {
        // choose an admissible successor uniformly
        int tries = 0;
        for (;;) {
            int s = pick(rng);
            if (d.adj[core[static_cast<size_t>(i - 1)]][s]) {
                core[static_cast<size_t>(i)] = static_cast<std::uint8_t>(s);
                break;
            }
            if (++tries > 64 * d.k) {
                // fall back to the first admissible successor
                for (int t = 0; t < d.k; ++t)
                    if (d.adj[core[static_cast<size_t>(i - 1)]][t]) {
                        core[static_cast<size_t>(i)] = static_cast<std::uint8_t>(t);
                        break;
                    }
                break;
            }
        }
    }
    const Word& lcyc = d.cycle_through[core[0]];
    Word rcyc = d.cycle_through[core[static_cast<size_t>(len - 1)]];
    // rotate the right cycle so its first symbol follows core.back()
    std::rotate(rcyc.begin(), rcyc.begin() + 1, rcyc.end());
    return SymbolPoint::from_parts(lcyc, core, rcyc, -core_radius);
}

SymbolPoint HyperbolicSystem::random_perturbation(const SymbolPoint& x, int keep_radius,
                                                  std::mt19937_64& rng) const {
    const SftData& d = sft_data();
    std::uniform_int_distribution<int> pick(0, d.k - 1);
    auto forward_step = [&](int from) {
        for (int tries = 0; tries < 64 * d.k; ++tries) {
            const int s = pick(rng);
            if (d.adj[static_cast<size_t>(from)][static_cast<size_t>(s)]) return s;
        }
        for (int s = 0; s < d.k; ++s)
            if (d.adj[static_cast<size_t>(from)][static_cast<size_t>(s)]) return s;
        throw std::logic_error("symbol without successor in a primitive graph");
    };
    auto backward_step = [&](int to) {
        for (int tries = 0; tries < 64 * d.k; ++tries) {
            const int s = pick(rng);
            if (d.adj[static_cast<size_t>(s)][static_cast<size_t>(to)]) return s;
        }
        for (int s = 0; s < d.k; ++s)
            if (d.adj[static_cast<size_t>(s)][static_cast<size_t>(to)]) return s;
        throw std::logic_error("symbol without predecessor in a primitive graph");
    };

    const int ext = 24;
    const int r = keep_radius;
    Word core(static_cast<size_t>(2 * (r + ext) + 1));
    for (int j = -r; j <= r; ++j)
        core[static_cast<size_t>(j + r + ext)] = static_cast<std::uint8_t>(x.symbol_at(j));
    for (int j = r + 1; j <= r + ext; ++j)
        core[static_cast<size_t>(j + r + ext)] =
            static_cast<std::uint8_t>(forward_step(core[static_cast<size_t>(j - 1 + r + ext)]));
    for (int j = -r - 1; j >= -r - ext; --j)
        core[static_cast<size_t>(j + r + ext)] =
            static_cast<std::uint8_t>(backward_step(core[static_cast<size_t>(j + 1 + r + ext)]));

    const Word& lcyc = d.cycle_through[core.front()];
    Word rcyc = d.cycle_through[core.back()];
    std::rotate(rcyc.begin(), rcyc.begin() + 1, rcyc.end());
    return SymbolPoint::from_parts(lcyc, core, rcyc, -(r + ext));
}

bool HyperbolicSystem::sft_valid(const SymbolPoint& x) const {
    const SftData& d = sft_data();
    auto ok = [&](int a, int b) { return a < d.k && b < d.k && d.adj[a][b] != 0; };
    const Word &L = x.left(), &C = x.core(), &R = x.right();
    for (size_t i = 0; i < L.size(); ++i)
        if (!ok(L[i], L[(i + 1) % L.size()])) return false;
    for (size_t i = 0; i < R.size(); ++i)
        if (!ok(R[i], R[(i + 1) % R.size()])) return false;
    for (size_t i = 0; i + 1 < C.size(); ++i)
        if (!ok(C[i], C[i + 1])) return false;
    if (!C.empty()) {
        if (!ok(L.back(), C.front())) return false;
        if (!ok(C.back(), R.front())) return false;
    } else if (!(L == R && x.core_start() == 0)) {
        if (!ok(L.back(), R.front())) return false;
    }
    return true;
}

namespace {

// window of radius q around coordinate c, as a byte string key
std::string window_key(const SymbolPoint& x, std::int64_t c, int q) {
    std::string s;
    s.reserve(static_cast<size_t>(2 * q + 1));
    for (std::int64_t j = -q; j <= q; ++j)
        s.push_back(static_cast<char>(x.symbol_at(c + j)));
    return s;
}

}  // namespace

double HyperbolicSystem::sft_coverage(const SymbolPoint& x0, std::int64_t length,
                                      int period) const {
    // test grid: all periodic sequences of period `period`; min distance to
    // the orbit is 2^-(q*+1) where q* is the deepest window agreement, found
    // with per-depth window sets over the orbit (built lazily upward, since
    // agreements stop at modest depth)
    const int max_depth = 24;
    std::vector<std::unordered_set<std::string>> seen(static_cast<size_t>(max_depth) + 1);
    std::vector<bool> built(static_cast<size_t>(max_depth) + 1, false);
    auto ensure = [&](int q) -> const std::unordered_set<std::string>& {
        auto& set = seen[static_cast<size_t>(q)];
        if (!built[static_cast<size_t>(q)]) {
            set.reserve(static_cast<size_t>(length) + 1);
            for (std::int64_t i = 0; i <= length; ++i) set.insert(window_key(x0, i, q));
            built[static_cast<size_t>(q)] = true;
        }
        return set;
    };
    std::vector<SystemPoint> grid = sft_periodic_points(period, 20'000'000);
    double worst = 0.0;
    for (const SystemPoint& gp : grid) {
        const SymbolPoint& t = std::get<SymbolPoint>(gp);
        double dist = 1.0;  // never caps below: centers may already disagree
        for (int q = 0; q <= max_depth; ++q) {
            if (!ensure(q).count(window_key(t, 0, q))) break;
            dist = std::ldexp(1.0, -(q + 1));
        }
        if (dist > worst) worst = dist;
    }
    return worst;
}

DenseOrbit HyperbolicSystem::sft_dense_orbit(std::int64_t length, int coverage_period) const {
    const SftData& d = sft_data();

    // pick the largest word length w whose full enumeration (with connector
    // paths) fits in the orbit length
    auto count_words = [&](int w) -> std::int64_t {
        std::vector<std::int64_t> v(static_cast<size_t>(d.k), 1);
        for (int step = 1; step < w; ++step) {
            std::vector<std::int64_t> nv(static_cast<size_t>(d.k), 0);
            for (int a = 0; a < d.k; ++a)
                for (int b = 0; b < d.k; ++b)
                    if (d.adj[a][b]) {
                        nv[static_cast<size_t>(a)] += v[static_cast<size_t>(b)];
                        if (nv[static_cast<size_t>(a)] > (std::int64_t(1) << 40))
                            return std::int64_t(1) << 40;
                    }
            v = nv;
        }
        std::int64_t total = 0;
        for (auto c : v) total += c;
        return total;
    };
    int w = 1;
    while (w < 30) {
        const std::int64_t nw = count_words(w + 1);
        if (nw * (w + 1 + d.k) > std::max<std::int64_t>(length, 16)) break;
        ++w;
    }

    // concatenate every admissible word of length w, joined by shortest paths
    Word core;
    Word word(static_cast<size_t>(w));
    auto emit = [&](const Word& word_to_add) {
        if (!core.empty()) {
            int cur = core.back();
            const int target = word_to_add[0];
            if (cur == target && !d.adj[cur][target]) {
                // bridge with the shortest cycle through target
                const Word& cyc = d.cycle_through[static_cast<size_t>(target)];
                for (size_t i = 1; i < cyc.size(); ++i) core.push_back(cyc[i]);
                cur = core.back();
            }
            while (!d.adj[cur][target]) {
                const int nxt = d.next_hop[static_cast<size_t>(cur)][static_cast<size_t>(target)];
                core.push_back(static_cast<std::uint8_t>(nxt));
                cur = nxt;
            }
        }
        core.insert(core.end(), word_to_add.begin(), word_to_add.end());
    };
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == w) {
            emit(word);
            return;
        }
        for (int s = 0; s < d.k; ++s) {
            if (pos > 0 && !d.adj[word[static_cast<size_t>(pos - 1)]][s]) continue;
            word[static_cast<size_t>(pos)] = static_cast<std::uint8_t>(s);
            self(self, pos + 1);
        }
    };
    rec(rec, 0);

    const Word& lcyc = d.cycle_through[core.front()];
    Word rcyc = d.cycle_through[core.back()];
    std::rotate(rcyc.begin(), rcyc.begin() + 1, rcyc.end());
    SymbolPoint x0 = SymbolPoint::from_parts(lcyc, core, rcyc, 0);

    DenseOrbit orbit;
    orbit.x0 = x0;
    orbit.length = length;
    orbit.coverage_radius = sft_coverage(x0, length, coverage_period);
    orbit.description = "all admissible words of length " + std::to_string(w) +
                        " joined by connector paths; coverage vs period-" +
                        std::to_string(coverage_period) + " grid";
    return orbit;
}

}  // namespace livsic
