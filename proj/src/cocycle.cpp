#include "livsic/cocycle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

namespace livsic {

// ---------------------------------------------------------------------------
// GeneratorMap
// ---------------------------------------------------------------------------

void GeneratorMap::validate(const HyperbolicSystem& sys, const RingOptions& opts) const {
    std::mt19937_64 rng(0xC0C);
    for (int i = 0; i < 64; ++i) {
        SystemPoint x = sys.random_point(rng);
        try {
            (void)inverse(eval(sys, x), opts);
        } catch (const SingularError&) {
            throw ConfigError("generator value is not invertible at a sampled point (" +
                              describe() + ")");
        }
    }
}

// ---------------------------------------------------------------------------
// WindowGenerator
// ---------------------------------------------------------------------------

WindowGenerator::WindowGenerator(int radius, std::unordered_map<std::string, RingElement> table,
                                 double alpha)
    : GeneratorMap(alpha, 0), radius_(radius), table_(std::move(table)) {
    if (radius_ < 0) throw ConfigError("window radius must be >= 0");
    if (table_.empty()) throw ConfigError("window table is empty");
    const size_t want = static_cast<size_t>(2 * radius_ + 1);
    for (const auto& [word, value] : table_) {
        if (word.size() != want)
            throw ConfigError("window table key has length " + std::to_string(word.size()) +
                              ", expected " + std::to_string(want));
        if (dim_ == 0) dim_ = value.dim();
        if (value.dim() != dim_) throw ConfigError("window table mixes ring dimensions");
    }
}

std::string WindowGenerator::key_for(const SymbolPoint& x, std::int64_t center, int radius) {
    std::string key;
    key.reserve(static_cast<size_t>(2 * radius + 1));
    for (std::int64_t j = -radius; j <= radius; ++j)
        key.push_back(static_cast<char>('0' + x.symbol_at(center + j)));
    return key;
}

RingElement WindowGenerator::eval(const HyperbolicSystem& sys, const SystemPoint& x) const {
    return eval_at(sys, x, 0);
}

RingElement WindowGenerator::eval_at(const HyperbolicSystem&, const SystemPoint& base,
                                     std::int64_t offset) const {
    const SymbolPoint& x = std::get<SymbolPoint>(base);
    const std::string key = key_for(x, offset, radius_);
    auto it = table_.find(key);
    if (it == table_.end())
        throw ConfigError("window table is missing admissible word \"" + key + "\"");
    return it->second;
}

std::string WindowGenerator::describe() const {
    return "window generator, radius " + std::to_string(radius_) + ", " +
           std::to_string(table_.size()) + " words";
}

void WindowGenerator::validate(const HyperbolicSystem& sys, const RingOptions& opts) const {
    if (!sys.is_sft()) throw ConfigError("window generators are defined over SFT systems");
    // exhaustive over admissible windows
    const int len = 2 * radius_ + 1;
    std::string word(static_cast<size_t>(len), '0');
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == len) {
            auto it = table_.find(word);
            if (it == table_.end())
                throw ConfigError("window table is missing admissible word \"" + word + "\"");
            try {
                (void)inverse(it->second, opts);
            } catch (const SingularError&) {
                throw ConfigError("window table value for \"" + word + "\" is not invertible");
            }
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

// ---------------------------------------------------------------------------
// ExprGenerator: element and scalar expression trees over torus coordinates
// ---------------------------------------------------------------------------

struct ExprGenerator::Node {
    enum Kind {
        kConst,
        kNumber,  // number * identity when used as an element
        kIdentity,
        kExp,
        kInv,
        kMul,
        kAdd,
        kScale,  // scale(scalar, element)
        kCoord,  // x1 or x2 as a scalar
        kSin,    // sin(2 pi mult * coord)
        kCos,
        kSMul,
        kSAdd
    } kind;
    double num = 0.0;
    int trig_mult = 1;
    int coord = 1;
    RingElement constant;
    std::unique_ptr<Node> a, b;
};

namespace {

struct ExprParser {
    using Node = ExprGenerator::Node;

    const std::string& src;
    size_t pos;
    const std::unordered_map<std::string, RingElement>& constants;

    void skip() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c))
            throw ConfigError("expression parse error: expected '" + std::string(1, c) +
                              "' at offset " + std::to_string(pos) + " in \"" + src + "\"");
    }

    std::string ident() {
        skip();
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        return src.substr(start, pos - start);
    }

    bool peek_number() {
        skip();
        return pos < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '-' ||
                src[pos] == '.');
    }

    double number() {
        skip();
        size_t end = pos;
        if (end < src.size() && (src[end] == '-' || src[end] == '+')) ++end;
        while (end < src.size() && (std::isdigit(static_cast<unsigned char>(src[end])) ||
                                    src[end] == '.' || src[end] == 'e' || src[end] == 'E' ||
                                    ((src[end] == '-' || src[end] == '+') &&
                                     (src[end - 1] == 'e' || src[end - 1] == 'E'))))
            ++end;
        if (end == pos)
            throw ConfigError("expression parse error: expected number at offset " +
                              std::to_string(pos));
        const double v = std::stod(src.substr(pos, end - pos));
        pos = end;
        return v;
    }

    std::unique_ptr<Node> make(Node::Kind k) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        return n;
    }

    std::unique_ptr<Node> trig(Node::Kind k) {
        auto n = make(k);
        expect('(');
        if (peek_number()) {
            const double m = number();
            if (m != std::floor(m))
                throw ConfigError("trig frequency must be an integer multiple of the coordinate");
            n->trig_mult = static_cast<int>(m);
            expect('*');
        }
        const std::string c = ident();
        if (c == "x1")
            n->coord = 1;
        else if (c == "x2")
            n->coord = 2;
        else
            throw ConfigError("trig argument must be x1 or x2, got \"" + c + "\"");
        expect(')');
        return n;
    }

    std::unique_ptr<Node> scalar() {
        if (peek_number()) {
            auto n = make(Node::kNumber);
            n->num = number();
            return n;
        }
        const std::string name = ident();
        if (name == "sin") return trig(Node::kSin);
        if (name == "cos") return trig(Node::kCos);
        if (name == "x1" || name == "x2") {
            auto n = make(Node::kCoord);
            n->coord = name == "x1" ? 1 : 2;
            return n;
        }
        if (name == "smul" || name == "sadd") {
            auto n = make(name == "smul" ? Node::kSMul : Node::kSAdd);
            expect('(');
            n->a = scalar();
            expect(',');
            n->b = scalar();
            expect(')');
            return n;
        }
        throw ConfigError("unknown scalar term \"" + name + "\"");
    }

    std::unique_ptr<Node> element() {
        if (peek_number()) {
            auto n = make(Node::kNumber);
            n->num = number();
            return n;
        }
        const std::string name = ident();
        if (name.empty())
            throw ConfigError("expression parse error at offset " + std::to_string(pos));
        if (name == "e") return make(Node::kIdentity);
        if (name == "exp" || name == "inv") {
            auto n = make(name == "exp" ? Node::kExp : Node::kInv);
            expect('(');
            n->a = element();
            expect(')');
            return n;
        }
        if (name == "mul" || name == "add") {
            auto n = make(name == "mul" ? Node::kMul : Node::kAdd);
            expect('(');
            n->a = element();
            expect(',');
            n->b = element();
            expect(')');
            return n;
        }
        if (name == "scale") {
            auto n = make(Node::kScale);
            expect('(');
            n->a = scalar();
            expect(',');
            n->b = element();
            expect(')');
            return n;
        }
        auto it = constants.find(name);
        if (it == constants.end())
            throw ConfigError("unknown constant \"" + name + "\" in expression");
        auto n = make(Node::kConst);
        n->constant = it->second;
        return n;
    }
};

double eval_scalar(const ExprGenerator::Node& n, double x1, double x2) {
    using Node = ExprGenerator::Node;
    switch (n.kind) {
        case Node::kNumber: return n.num;
        case Node::kCoord: return n.coord == 1 ? x1 : x2;
        case Node::kSin:
            return std::sin(2.0 * std::numbers::pi * n.trig_mult * (n.coord == 1 ? x1 : x2));
        case Node::kCos:
            return std::cos(2.0 * std::numbers::pi * n.trig_mult * (n.coord == 1 ? x1 : x2));
        case Node::kSMul: return eval_scalar(*n.a, x1, x2) * eval_scalar(*n.b, x1, x2);
        case Node::kSAdd: return eval_scalar(*n.a, x1, x2) + eval_scalar(*n.b, x1, x2);
        default: throw ConfigError("scalar expression expected");
    }
}

RingElement eval_element(const ExprGenerator::Node& n, double x1, double x2, int dim) {
    using Node = ExprGenerator::Node;
    switch (n.kind) {
        case Node::kConst: return n.constant;
        case Node::kNumber: return RingElement::identity(dim).scaled(n.num);
        case Node::kIdentity: return RingElement::identity(dim);
        case Node::kExp: return exp_element(eval_element(*n.a, x1, x2, dim));
        case Node::kInv: return inverse(eval_element(*n.a, x1, x2, dim));
        case Node::kMul: return eval_element(*n.a, x1, x2, dim) * eval_element(*n.b, x1, x2, dim);
        case Node::kAdd: return eval_element(*n.a, x1, x2, dim) + eval_element(*n.b, x1, x2, dim);
        case Node::kScale:
            return eval_element(*n.b, x1, x2, dim).scaled(eval_scalar(*n.a, x1, x2));
        default: throw ConfigError("element expression expected");
    }
}

}  // namespace

ExprGenerator::ExprGenerator(const std::string& formula,
                             std::unordered_map<std::string, RingElement> constants, int dim,
                             double alpha)
    : GeneratorMap(alpha, dim), formula_(formula) {
    for (const auto& [name, value] : constants)
        if (value.dim() != dim)
            throw ConfigError("constant \"" + name + "\" has dimension " +
                              std::to_string(value.dim()) + ", ring has " + std::to_string(dim));
    ExprParser p{formula, 0, constants};
    root_ = p.element();
    p.skip();
    if (p.pos != formula.size())
        throw ConfigError("trailing characters in expression at offset " + std::to_string(p.pos));
}

ExprGenerator::~ExprGenerator() = default;

RingElement ExprGenerator::eval(const HyperbolicSystem&, const SystemPoint& x) const {
    if (!std::holds_alternative<TorusPoint>(x))
        throw ConfigError("expression generators are defined over toral systems");
    const TorusPoint& t = std::get<TorusPoint>(x);
    return eval_element(*root_, t.xd(), t.yd(), dim_);
}

std::string ExprGenerator::describe() const { return "expr generator \"" + formula_ + "\""; }

// ---------------------------------------------------------------------------
// CoboundaryGenerator / ScaledGenerator
// ---------------------------------------------------------------------------

CoboundaryGenerator::CoboundaryGenerator(std::shared_ptr<const GeneratorMap> transfer,
                                         RingOptions opts)
    : GeneratorMap(transfer->alpha(), transfer->ring_dim()),
      transfer_(std::move(transfer)),
      opts_(opts) {}

RingElement CoboundaryGenerator::eval(const HyperbolicSystem& sys, const SystemPoint& x) const {
    return transfer_->eval(sys, sys.apply(x, 1)) * inverse(transfer_->eval(sys, x), opts_);
}

RingElement CoboundaryGenerator::eval_at(const HyperbolicSystem& sys, const SystemPoint& base,
                                         std::int64_t offset) const {
    return transfer_->eval_at(sys, base, offset + 1) *
           inverse(transfer_->eval_at(sys, base, offset), opts_);
}

std::string CoboundaryGenerator::describe() const {
    return "coboundary of [" + transfer_->describe() + "]";
}

ScaledGenerator::ScaledGenerator(std::shared_ptr<const GeneratorMap> base, double factor)
    : GeneratorMap(base->alpha(), base->ring_dim()), base_(std::move(base)), factor_(factor) {}

RingElement ScaledGenerator::eval(const HyperbolicSystem& sys, const SystemPoint& x) const {
    return base_->eval(sys, x).scaled(factor_);
}

RingElement ScaledGenerator::eval_at(const HyperbolicSystem& sys, const SystemPoint& base,
                                     std::int64_t offset) const {
    return base_->eval_at(sys, base, offset).scaled(factor_);
}

std::string ScaledGenerator::describe() const {
    return std::to_string(factor_) + " * [" + base_->describe() + "]";
}

// ---------------------------------------------------------------------------
// CocycleEvaluator
// ---------------------------------------------------------------------------

CocycleEvaluator::CocycleEvaluator(const HyperbolicSystem& sys,
                                   std::shared_ptr<const GeneratorMap> gen, RingOptions opts)
    : sys_(&sys), gen_(std::move(gen)), opts_(opts) {}

RingElement CocycleEvaluator::eval_block(const SystemPoint& x, int level) const {
    // a(2^level, x), dyadically bracketed, newest factor on the left
    if (level == 0) return gen_->eval(*sys_, x);
    const std::int64_t half = std::int64_t(1) << (level - 1);
    return eval_block(sys_->apply(x, half), level - 1) * eval_block(x, level - 1);
}

RingElement CocycleEvaluator::evaluate(std::int64_t n, const SystemPoint& x) const {
    if (n == 0) return RingElement::identity(gen_->ring_dim());
    if (n > 0) {
        RingElement acc;
        SystemPoint y = x;
        bool first = true;
        for (int j = 0; (std::int64_t(1) << j) <= n; ++j) {
            if ((n >> j) & 1) {
                RingElement blk = eval_block(y, j);
                acc = first ? blk : blk * acc;
                first = false;
                y = sys_->apply(y, std::int64_t(1) << j);
            }
        }
        return acc;
    }
    // a(-m, x) is the cocycle over sigma^-1 generated by y -> a^-1(sigma^-1 y)
    const std::int64_t m = -n;
    auto neg_block = [&](auto&& self, const SystemPoint& y, int level) -> RingElement {
        if (level == 0) return inverse(gen_->eval(*sys_, sys_->apply(y, -1)), opts_);
        const std::int64_t half = std::int64_t(1) << (level - 1);
        return self(self, sys_->apply(y, -half), level - 1) * self(self, y, level - 1);
    };
    RingElement acc;
    SystemPoint y = x;
    bool first = true;
    for (int j = 0; (std::int64_t(1) << j) <= m; ++j) {
        if ((m >> j) & 1) {
            RingElement blk = neg_block(neg_block, y, j);
            acc = first ? blk : blk * acc;
            first = false;
            y = sys_->apply(y, -(std::int64_t(1) << j));
        }
    }
    return acc;
}

void CocycleEvaluator::factor_sweep(
    const SystemPoint& x, std::int64_t i0, std::int64_t count,
    const std::function<void(std::int64_t, const RingElement&)>& sink) const {
    if (gen_->fast_offset_eval()) {
        for (std::int64_t i = 0; i < count; ++i) sink(i, gen_->eval_at(*sys_, x, i0 + i));
        return;
    }
    SystemPoint y = sys_->apply(x, i0);
    for (std::int64_t i = 0; i < count; ++i) {
        sink(i, gen_->eval(*sys_, y));
        if (i + 1 < count) y = sys_->apply(y, 1);
    }
}

int CocycleEvaluator::attach_orbit(const SystemPoint& base, std::int64_t length) {
    Orbit orb;
    orb.base = base;
    orb.length = length;
    orb.factors.reserve(static_cast<size_t>(length));
    factor_sweep(base, 0, length,
                 [&](std::int64_t, const RingElement& f) { orb.factors.push_back(f); });
    orbits_.push_back(std::move(orb));
    return static_cast<int>(orbits_.size()) - 1;
}

const SystemPoint& CocycleEvaluator::orbit_base(int orbit_id) const {
    return orbits_.at(static_cast<size_t>(orbit_id)).base;
}

std::int64_t CocycleEvaluator::orbit_length(int orbit_id) const {
    return orbits_.at(static_cast<size_t>(orbit_id)).length;
}

const RingElement& CocycleEvaluator::orbit_factor(int orbit_id, std::int64_t i) const {
    return orbits_.at(static_cast<size_t>(orbit_id)).factors.at(static_cast<size_t>(i));
}

RingElement CocycleEvaluator::orbit_block(const Orbit& orb, std::int64_t offset, int level,
                                          bool use_cache) const {
    if (level == 0) return orb.factors[static_cast<size_t>(offset)];
    const std::uint64_t key =
        (static_cast<std::uint64_t>(offset) << 6) | static_cast<std::uint64_t>(level);
    if (use_cache) {
        auto it = orb.blocks.find(key);
        if (it != orb.blocks.end()) return it->second;
    }
    const std::int64_t half = std::int64_t(1) << (level - 1);
    RingElement val = orbit_block(orb, offset + half, level - 1, use_cache) *
                      orbit_block(orb, offset, level - 1, use_cache);
    if (use_cache) orb.blocks.emplace(key, val);
    return val;
}

RingElement CocycleEvaluator::evaluate_on_orbit(int orbit_id, std::int64_t offset, std::int64_t n,
                                                bool use_cache) const {
    const Orbit& orb = orbits_.at(static_cast<size_t>(orbit_id));
    if (n < 0 || offset < 0 || offset + n > orb.length)
        return evaluate(n, sys_->apply(orb.base, offset));
    if (n == 0) return RingElement::identity(gen_->ring_dim());
    RingElement acc;
    std::int64_t cur = offset;
    bool first = true;
    for (int j = 0; (std::int64_t(1) << j) <= n; ++j) {
        if ((n >> j) & 1) {
            RingElement blk = orbit_block(orb, cur, j, use_cache);
            acc = first ? blk : blk * acc;
            first = false;
            cur += std::int64_t(1) << j;
        }
    }
    return acc;
}

double CocycleEvaluator::identity_residual(std::int64_t n, std::int64_t k,
                                           const SystemPoint& x) const {
    const RingElement whole = evaluate(n, x);
    const RingElement split = evaluate(n - k, sys_->apply(x, k)) * evaluate(k, x);
    return (whole - split).norm();
}

std::pair<RingElement, double> CocycleEvaluator::obstruction(const SystemPoint& p,
                                                             std::int64_t n) const {
    if (!point_equal(sys_->apply(p, n), p))
        throw std::invalid_argument("obstruction: point is not exactly n-periodic");
    RingElement prod = evaluate(n, p);
    const double dev = group_dist(prod, RingElement::identity(prod.dim()), opts_);
    return {std::move(prod), dev};
}

namespace {

struct ScaledProduct {
    RingElement m;
    double ls = 0.0;
    void renorm() {
        const double nm = m.norm();
        if (nm > 1e80 || (nm < 1e-80 && nm > 0.0)) {
            m = m.scaled(1.0 / nm);
            ls += std::log(nm);
        }
    }
    double log_norm() const { return std::log(m.norm()) + ls; }
};

}  // namespace

CocycleEvaluator::NormSweep CocycleEvaluator::norm_sweep(const SystemPoint& x, int n_max,
                                                         bool with_inverse,
                                                         bool with_backward) const {
    NormSweep out;
    out.s_fwd.reserve(static_cast<size_t>(n_max));
    if (with_inverse) out.s_fwd_inv.reserve(static_cast<size_t>(n_max));
    if (with_backward) out.s_bwd.reserve(static_cast<size_t>(n_max));

    ScaledProduct fwd{RingElement::identity(gen_->ring_dim()), 0.0};
    ScaledProduct fwd_inv{RingElement::identity(gen_->ring_dim()), 0.0};
    factor_sweep(x, 0, n_max, [&](std::int64_t, const RingElement& f) {
        fwd.m = f * fwd.m;
        fwd.renorm();
        out.s_fwd.push_back(fwd.log_norm());
        if (with_inverse) {
            // [a(n,x)]^-1 accumulated as the reverse-order product of factor
            // inverses; never inverts an ill-conditioned long product
            fwd_inv.m = fwd_inv.m * inverse(f, opts_);
            fwd_inv.renorm();
            out.s_fwd_inv.push_back(fwd_inv.log_norm());
        }
    });

    if (with_backward) {
        ScaledProduct bwd{RingElement::identity(gen_->ring_dim()), 0.0};
        SystemPoint y = x;
        for (int j = 1; j <= n_max; ++j) {
            y = sys_->apply(y, -1);
            bwd.m = inverse(gen_->eval(*sys_, y), opts_) * bwd.m;
            bwd.renorm();
            out.s_bwd.push_back(bwd.log_norm());
        }
    }
    return out;
}

std::vector<double> CocycleEvaluator::suffix_log_norms(const SystemPoint& x,
                                                       std::int64_t n) const {
    std::vector<RingElement> factors;
    factors.reserve(static_cast<size_t>(n));
    factor_sweep(x, 0, n, [&](std::int64_t, const RingElement& f) { factors.push_back(f); });

    std::vector<double> out(static_cast<size_t>(n) + 1, 0.0);
    ScaledProduct suffix{RingElement::identity(gen_->ring_dim()), 0.0};
    for (std::int64_t k = n - 1; k >= 0; --k) {
        suffix.m = suffix.m * factors[static_cast<size_t>(k)];
        suffix.renorm();
        out[static_cast<size_t>(k)] = suffix.log_norm();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hölder estimation
// ---------------------------------------------------------------------------

HolderFit holder_fit_from_log_pairs(const std::vector<LogPair>& pairs, double declared_alpha) {
    HolderFit fit;
    fit.pairs = static_cast<int>(pairs.size());
    const double neg_inf = -std::numeric_limits<double>::infinity();
    double log_h = neg_inf;
    bool any_gap = false;

    // decay diagnostics: gap ceiling overall vs over the finest quartile
    fit.max_gap_log = neg_inf;
    fit.small_scale_gap_log = neg_inf;
    {
        std::vector<double> dists;
        dists.reserve(pairs.size());
        for (const auto& p : pairs) dists.push_back(p.ln_d);
        if (!dists.empty()) {
            std::sort(dists.begin(), dists.end());
            const double quartile = dists[dists.size() / 4];
            for (const auto& p : pairs) {
                if (p.zero_gap) continue;
                fit.max_gap_log = std::max(fit.max_gap_log, p.ln_gap);
                if (p.ln_d <= quartile)
                    fit.small_scale_gap_log = std::max(fit.small_scale_gap_log, p.ln_gap);
            }
        }
    }
    // upper envelope: per log2-distance bin, the pair with the largest gap
    std::unordered_map<int, std::pair<double, double>> bins;  // bin -> (ln d, ln gap)
    std::unordered_map<int, bool> bins_seen;
    for (const auto& p : pairs) {
        const int bin = static_cast<int>(std::floor(p.ln_d / std::log(2.0)));
        bins_seen[bin] = true;
        if (p.zero_gap) continue;
        log_h = std::max(log_h, p.ln_gap - declared_alpha * p.ln_d);
        auto it = bins.find(bin);
        if (it == bins.end() || p.ln_gap > it->second.second) bins[bin] = {p.ln_d, p.ln_gap};
        any_gap = true;
    }
    if (bins_seen.size() < 2)
        throw DegenerateSampleError("holder fit: sampled distances fall in a single bin");
    fit.log_H = log_h;
    fit.H_fit = any_gap ? std::exp(log_h) : 0.0;
    if (!any_gap) {
        fit.all_values_equal = true;
        fit.alpha_fit = declared_alpha;
        fit.log_H = -std::numeric_limits<double>::infinity();
        return fit;
    }
    if (bins.size() < 2) {
        fit.alpha_fit = declared_alpha;
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [bin, pt] : bins) {
        (void)bin;
        sx += pt.first;
        sy += pt.second;
        sxx += pt.first * pt.first;
        sxy += pt.first * pt.second;
    }
    const double np = static_cast<double>(bins.size());
    fit.alpha_fit = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    return fit;
}

HolderFit holder_fit_from_pairs(const std::vector<std::pair<double, double>>& pairs,
                                double declared_alpha) {
    std::vector<LogPair> logs;
    logs.reserve(pairs.size());
    for (const auto& [d, gap] : pairs) {
        if (d <= 0.0) continue;
        LogPair p;
        p.ln_d = std::log(d);
        p.zero_gap = gap <= 0.0;
        p.ln_gap = p.zero_gap ? -std::numeric_limits<double>::infinity() : std::log(gap);
        logs.push_back(p);
    }
    return holder_fit_from_log_pairs(logs, declared_alpha);
}

double exact_window_holder(const WindowGenerator& gen, const HyperbolicSystem& sys) {
    const int w = gen.radius();
    std::vector<std::string> words;
    {
        const int len = 2 * w + 1;
        std::string word(static_cast<size_t>(len), '0');
        auto rec = [&](auto&& self, int pos) -> void {
            if (pos == len) {
                words.push_back(word);
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
    if (words.size() > 8192)
        throw BudgetError("window too wide for the exact Hölder enumeration");
    double best = 0.0;
    for (size_t i = 0; i < words.size(); ++i)
        for (size_t j = i + 1; j < words.size(); ++j) {
            const std::string &u = words[i], &v = words[j];
            int radius = w + 1;
            for (int r = 0; r <= w; ++r) {
                if (u[static_cast<size_t>(w + r)] != v[static_cast<size_t>(w + r)] ||
                    u[static_cast<size_t>(w - r)] != v[static_cast<size_t>(w - r)]) {
                    radius = r;
                    break;
                }
            }
            if (radius > w) continue;  // identical as windows
            const double gap = (gen.table().at(u) - gen.table().at(v)).norm();
            best = std::max(best, gap * std::ldexp(1.0, radius));
        }
    return best;
}

double generator_holder_constant(const GeneratorMap& gen, const HyperbolicSystem& sys,
                                 std::uint64_t seed) {
    if (const auto* win = dynamic_cast<const WindowGenerator*>(&gen)) {
        try {
            return exact_window_holder(*win, sys);
        } catch (const BudgetError&) {
        }
    }
    return 3.0 * holder_estimate(gen, sys, 400, seed).H_fit;
}

HolderFit holder_estimate(const GeneratorMap& map, const HyperbolicSystem& sys, int pair_count,
                          std::uint64_t seed) {
    if (pair_count < 100) throw ConfigError("holder_estimate needs at least 100 pairs");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(static_cast<size_t>(pair_count));
    int attempts = 0;
    if (sys.is_sft()) {
        // radius 0 draws an unconstrained pair so the distance-1 bin is sampled
        std::uniform_int_distribution<int> radius(0, 16);
        while (static_cast<int>(pairs.size()) < pair_count && ++attempts < 8 * pair_count) {
            SystemPoint xp = sys.random_point(rng);
            const SymbolPoint& x = std::get<SymbolPoint>(xp);
            const int r = radius(rng);
            SymbolPoint y = r == 0 ? std::get<SymbolPoint>(sys.random_point(rng))
                                   : sys.random_perturbation(x, r - 1, rng);
            const double d = sys.metric(xp, SystemPoint{y});
            if (d <= 0.0) continue;
            const double gap = (map.eval(sys, xp) - map.eval(sys, SystemPoint{y})).norm();
            pairs.emplace_back(d, gap);
        }
    } else {
        std::uniform_real_distribution<double> mag(0.3, 7.0);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        while (static_cast<int>(pairs.size()) < pair_count && ++attempts < 8 * pair_count) {
            SystemPoint xp = sys.random_point(rng);
            const TorusPoint& x = std::get<TorusPoint>(xp);
            const double eps = std::pow(10.0, -mag(rng));
            TorusPoint y = TorusPoint::from_doubles(x.xd() + eps * unit(rng),
                                                    x.yd() + eps * unit(rng), 64);
            const double d = sys.metric(xp, SystemPoint{y});
            if (d <= 0.0) continue;
            const double gap = (map.eval(sys, xp) - map.eval(sys, SystemPoint{y})).norm();
            pairs.emplace_back(d, gap);
        }
    }
    return holder_fit_from_pairs(pairs, map.alpha());
}

}  // namespace livsic
