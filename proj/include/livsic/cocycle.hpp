#ifndef LIVSIC_COCYCLE_HPP
#define LIVSIC_COCYCLE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "livsic/dynamics.hpp"
#include "livsic/ring.hpp"

namespace livsic {

// One-step generator a: X -> B^x with its declared Hölder exponent. Values
// must be invertible; validate() spot-checks (or, for window maps,
// exhaustively checks) that at construction time.
class GeneratorMap {
public:
    virtual ~GeneratorMap() = default;

    virtual RingElement eval(const HyperbolicSystem& sys, const SystemPoint& x) const = 0;

    // value at sigma^offset(base); overridden where that is cheaper than
    // materializing the shifted point
    virtual RingElement eval_at(const HyperbolicSystem& sys, const SystemPoint& base,
                                std::int64_t offset) const {
        return eval(sys, sys.apply(base, offset));
    }

    virtual bool fast_offset_eval() const { return false; }
    virtual std::string describe() const = 0;
    virtual void validate(const HyperbolicSystem& sys, const RingOptions& opts) const;

    double alpha() const { return alpha_; }
    int ring_dim() const { return dim_; }

protected:
    GeneratorMap(double alpha, int dim) : alpha_(alpha), dim_(dim) {}
    double alpha_;
    int dim_;
};

// SFT generator depending on the window x_{-w..w}, as a lookup table keyed by
// the window word. The canonical exactly-analyzable test family.
class WindowGenerator : public GeneratorMap {
public:
    WindowGenerator(int radius, std::unordered_map<std::string, RingElement> table,
                    double alpha = 1.0);

    RingElement eval(const HyperbolicSystem& sys, const SystemPoint& x) const override;
    RingElement eval_at(const HyperbolicSystem& sys, const SystemPoint& base,
                        std::int64_t offset) const override;
    bool fast_offset_eval() const override { return true; }
    std::string describe() const override;
    void validate(const HyperbolicSystem& sys, const RingOptions& opts) const override;

    int radius() const { return radius_; }
    const std::unordered_map<std::string, RingElement>& table() const { return table_; }

    static std::string key_for(const SymbolPoint& x, std::int64_t center, int radius);

private:
    int radius_;
    std::unordered_map<std::string, RingElement> table_;
};

// toral generator from a closed-form expression; see expr_generator.cpp for
// the grammar (constants, coordinates, sin/cos of integer multiples of
// 2 pi coordinate, ring operations, exp)
class ExprGenerator : public GeneratorMap {
public:
    ExprGenerator(const std::string& formula,
                  std::unordered_map<std::string, RingElement> constants, int dim,
                  double alpha);
    ~ExprGenerator() override;

    RingElement eval(const HyperbolicSystem& sys, const SystemPoint& x) const override;
    std::string describe() const override;

    struct Node;

private:
    std::unique_ptr<Node> root_;
    std::string formula_;
};

// arbitrary callable; the escape hatch for test cocycles
class CallableGenerator : public GeneratorMap {
public:
    using Fn = std::function<RingElement(const HyperbolicSystem&, const SystemPoint&)>;
    CallableGenerator(Fn fn, int dim, double alpha, std::string name)
        : GeneratorMap(alpha, dim), fn_(std::move(fn)), name_(std::move(name)) {}

    RingElement eval(const HyperbolicSystem& sys, const SystemPoint& x) const override {
        return fn_(sys, x);
    }
    std::string describe() const override { return name_; }

private:
    Fn fn_;
    std::string name_;
};

// a(x) = t(sigma x) * t(x)^-1 for a given transfer map t: the synthetic
// coboundary family used throughout verification
class CoboundaryGenerator : public GeneratorMap {
public:
    CoboundaryGenerator(std::shared_ptr<const GeneratorMap> transfer, RingOptions opts = {});

    RingElement eval(const HyperbolicSystem& sys, const SystemPoint& x) const override;
    RingElement eval_at(const HyperbolicSystem& sys, const SystemPoint& base,
                        std::int64_t offset) const override;
    bool fast_offset_eval() const override { return transfer_->fast_offset_eval(); }
    std::string describe() const override;
    const GeneratorMap& transfer() const { return *transfer_; }

private:
    std::shared_ptr<const GeneratorMap> transfer_;
    RingOptions opts_;
};

// constant scalar multiple of another generator (obstruction scaling tests)
class ScaledGenerator : public GeneratorMap {
public:
    ScaledGenerator(std::shared_ptr<const GeneratorMap> base, double factor);
    RingElement eval(const HyperbolicSystem& sys, const SystemPoint& x) const override;
    RingElement eval_at(const HyperbolicSystem& sys, const SystemPoint& base,
                        std::int64_t offset) const override;
    bool fast_offset_eval() const override { return base_->fast_offset_eval(); }
    std::string describe() const override;

private:
    std::shared_ptr<const GeneratorMap> base_;
    double factor_;
};

// Product evaluator for the cocycle generated by `gen` over `sys`:
//
//   a(n,x) = a(sigma^{n-1} x) ... a(sigma x) a(x)      n > 0
//   a(0,x) = e
//   a(n,x) = a^-1(sigma^n x) ... a^-1(sigma^-1 x)      n < 0
//
// Products keep the formula's order; long products are bracketed dyadically
// (a fixed deterministic bracketing, so cached and fresh evaluations are
// bit-identical). attach_orbit precomputes generator values along an orbit
// and enables block caching keyed by (offset, level).
class CocycleEvaluator {
public:
    CocycleEvaluator(const HyperbolicSystem& sys, std::shared_ptr<const GeneratorMap> gen,
                     RingOptions opts = {});

    const HyperbolicSystem& system() const { return *sys_; }
    const GeneratorMap& generator() const { return *gen_; }
    const RingOptions& ring_options() const { return opts_; }

    RingElement evaluate(std::int64_t n, const SystemPoint& x) const;

    int attach_orbit(const SystemPoint& base, std::int64_t length);
    const SystemPoint& orbit_base(int orbit_id) const;
    std::int64_t orbit_length(int orbit_id) const;
    const RingElement& orbit_factor(int orbit_id, std::int64_t i) const;
    RingElement evaluate_on_orbit(int orbit_id, std::int64_t offset, std::int64_t n,
                                  bool use_cache = true) const;

    // norm of a(n,x) - a(n-k, sigma^k x) a(k,x)
    double identity_residual(std::int64_t n, std::int64_t k, const SystemPoint& x) const;

    // requires sigma^n p = p exactly; returns a(n,p) and group_dist(a(n,p), e)
    std::pair<RingElement, double> obstruction(const SystemPoint& p, std::int64_t n) const;

    // scaled left-accumulation sweeps for growth analysis:
    //   s_fwd[n-1]     = ln ||a(n,x)||
    //   s_fwd_inv[n-1] = ln ||[a(n,x)]^-1||   (reverse-order product of factor inverses)
    //   s_bwd[n-1]     = ln ||a(-n,x)||
    struct NormSweep {
        std::vector<double> s_fwd, s_fwd_inv, s_bwd;
    };
    NormSweep norm_sweep(const SystemPoint& x, int n_max, bool with_inverse,
                         bool with_backward) const;

    // ln ||a(n-k, sigma^k x)|| for k = 0..n (suffix products, scaled)
    std::vector<double> suffix_log_norms(const SystemPoint& x, std::int64_t n) const;

private:
    struct Orbit {
        SystemPoint base;
        std::int64_t length = 0;
        std::vector<RingElement> factors;
        mutable std::unordered_map<std::uint64_t, RingElement> blocks;
    };

    const HyperbolicSystem* sys_;
    std::shared_ptr<const GeneratorMap> gen_;
    RingOptions opts_;
    std::vector<Orbit> orbits_;

    RingElement eval_block(const SystemPoint& x, int level) const;
    RingElement orbit_block(const Orbit& orb, std::int64_t offset, int level,
                            bool use_cache) const;
    void factor_sweep(const SystemPoint& x, std::int64_t i0, std::int64_t count,
                      const std::function<void(std::int64_t, const RingElement&)>& sink) const;
};

struct HolderFit {
    double alpha_fit = 0.0;
    double H_fit = 0.0;
    double log_H = 0.0;  // ln H_fit; stays finite when H_fit overflows
    int pairs = 0;
    bool all_values_equal = false;
    // decay diagnostics: max ln gap overall and over the smallest-distance
    // quartile of sampled pairs; a Hölder map's fine-scale gaps shrink
    double max_gap_log = 0.0;
    double small_scale_gap_log = 0.0;
    bool decays() const {
        return all_values_equal || !(small_scale_gap_log > max_gap_log + std::log(0.25));
    }
};

// log-domain pair for fits whose value gaps can overflow a double
struct LogPair {
    double ln_d = 0.0;
    double ln_gap = 0.0;
    bool zero_gap = false;
};

HolderFit holder_fit_from_log_pairs(const std::vector<LogPair>& pairs, double declared_alpha);

// Sample random point pairs across a spread of distances and fit
// log(value gap) <= log H + alpha log(dist): H_fit is the least H for the
// declared alpha; alpha_fit is the slope of the upper envelope.
HolderFit holder_estimate(const GeneratorMap& map, const HyperbolicSystem& sys, int pair_count,
                          std::uint64_t seed);

// shared fitting core, reused by the transfer-table Hölder fit
HolderFit holder_fit_from_pairs(const std::vector<std::pair<double, double>>& dist_gap_pairs,
                                double declared_alpha);

// exact Lipschitz-class constant of a window map: max over admissible word
// pairs of gap / 2^-N with N the first disagreement radius
double exact_window_holder(const WindowGenerator& gen, const HyperbolicSystem& sys);

// best available Hölder constant for a generator: exact for window maps,
// otherwise a sampled fit inflated by a safety factor
double generator_holder_constant(const GeneratorMap& gen, const HyperbolicSystem& sys,
                                 std::uint64_t seed = 0x401D);

}  // namespace livsic

#endif
