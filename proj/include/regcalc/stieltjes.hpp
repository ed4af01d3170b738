#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "ext_real.hpp"
#include "limit_engine.hpp"
#include "piecewise.hpp"

// The generalized derivative of f with respect to a strictly increasing
// alpha at an interior point x:
//
//   (D_a f)(x) = lim_{h->0+} [f-(x+h) - f+(x-h)] / [a-(x+h) - a+(x-h)]
//
// computed exactly as the jump ratio (f+(x)-f-(x))/(a+(x)-a-(x)) where alpha
// jumps, by the classical one-sided-derivative average where both functions
// are smooth across x, and by the sampled limit otherwise.

namespace regcalc {

enum class DerivMethod { jump_ratio, numeric_limit, classical_shortcut };

inline const char* deriv_method_name(DerivMethod m) {
    switch (m) {
        case DerivMethod::jump_ratio: return "jump_ratio";
        case DerivMethod::numeric_limit: return "numeric_limit";
        case DerivMethod::classical_shortcut: return "classical_shortcut";
    }
    return "?";
}

struct DerivativeResult {
    ExtReal value = ExtReal(0.0);
    DerivMethod method = DerivMethod::numeric_limit;
    std::optional<LimitEstimate> estimate;  // filled on the numeric path
};

// The difference-quotient limit failed to settle (no_limit or inconclusive).
class DerivativeError : public Error {
public:
    DerivativeError(const std::string& what, LimitEstimate est)
        : Error(what), estimate_(std::move(est)) {}
    const LimitEstimate& estimate() const { return estimate_; }

private:
    LimitEstimate estimate_;
};

struct DAlphaOptions {
    LimitOptions limits;
    double jump_rel = 1e-12;       // relative jump-detection threshold
    double min_alpha_slope = 1e-8; // classical shortcut needs |a'| at least this
    bool allow_shortcut = true;
    bool symmetric = false;        // use the f+(x+h) - f-(x-h) orientation
};

// Agreement predicate used by every derivative-rule cross-check: rel 1e-7 /
// abs 1e-9 for finite values, matching sign for infinities.
inline bool rule_close(ExtReal a, ExtReal b, double rtol = 1e-7, double atol = 1e-9) {
    if (a.is_finite() && b.is_finite()) {
        double x = a.raw(), y = b.raw();
        return std::abs(x - y) <= atol + rtol * std::max(std::abs(x), std::abs(y));
    }
    return a == b;
}

namespace detail {

// Breakpoints of f and alpha near x, for steering samples off junctions.
template <RegulatedFn F, RegulatedFn A>
std::vector<double> local_breakpoints(const F& f, const A& alpha, double x, double radius) {
    std::vector<double> bs = f.breakpoints_in(x - radius, x + radius, 128);
    std::vector<double> as = alpha.breakpoints_in(x - radius, x + radius, 128);
    bs.insert(bs.end(), as.begin(), as.end());
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    return bs;
}

inline bool near_any(const std::vector<double>& pts, double y, double tol) {
    auto it = std::lower_bound(pts.begin(), pts.end(), y);
    if (it != pts.end() && std::abs(*it - y) <= tol) return true;
    if (it != pts.begin() && std::abs(*(it - 1) - y) <= tol) return true;
    return false;
}

}  // namespace detail

template <RegulatedFn F, RegulatedFn A>
DerivativeResult d_alpha(const F& f, const A& alpha, double x, const DAlphaOptions& opt = {}) {
    ExtReal a = f.domain_a(), b = f.domain_b();
    if (alpha.domain_a() > a) a = alpha.domain_a();
    if (alpha.domain_b() < b) b = alpha.domain_b();
    if (!(ExtReal(x) > a) || !(ExtReal(x) < b))
        throw DomainError("derivative point " + double_str(x) + " not interior to (" + a.str() +
                          ", " + b.str() + ")");

    OneSidedPair fp = f.one_sided(x);
    OneSidedPair ap = alpha.one_sided(x);
    double fl = fp.left.finite(), fr = fp.right.finite();
    double al = ap.left.finite(), ar = ap.right.finite();

    double ascale = std::max(std::abs(al), std::abs(ar));
    double ajump = ar - al;
    if (ajump < -opt.jump_rel * (1.0 + ascale))
        throw PreconditionError("alpha is not increasing at " + double_str(x) + " (jump " +
                                double_str(ajump) + ")");
    if (ajump > opt.jump_rel * (1.0 + ascale)) {
        return DerivativeResult{ExtReal((fr - fl) / ajump), DerivMethod::jump_ratio, std::nullopt};
    }

    // alpha continuous at x from here on
    double fscale = std::max(std::abs(fl), std::abs(fr));
    bool f_continuous = std::abs(fr - fl) <= opt.jump_rel * (1.0 + fscale);
    if (opt.allow_shortcut && f_continuous) {
        std::optional<double> dfl = f.derivative_left(x), dfr = f.derivative_right(x);
        std::optional<double> dal = alpha.derivative_left(x), dar = alpha.derivative_right(x);
        if (dfl && dfr && dal && dar && std::abs(*dal + *dar) / 2.0 >= opt.min_alpha_slope) {
            double v = (*dfl + *dfr) / (*dal + *dar);
            if (std::isfinite(v))
                return DerivativeResult{ExtReal(v), DerivMethod::classical_shortcut,
                                        std::nullopt};
        }
    }

    // numeric difference quotient
    double gap = std::min(std::min(gap_to_breakpoint(f, x, true), gap_to_breakpoint(f, x, false)),
                          std::min(gap_to_breakpoint(alpha, x, true),
                                   gap_to_breakpoint(alpha, x, false)));
    double h0 = std::min(1.0, gap) / 4.0;
    if (a.is_finite()) h0 = std::min(h0, (x - a.raw()) / 2.0);
    if (b.is_finite()) h0 = std::min(h0, (b.raw() - x) / 2.0);

    std::vector<double> nearby = detail::local_breakpoints(f, alpha, x, 2.0 * h0);
    double snap_tol = 1e-12 * (1.0 + std::abs(x));
    std::vector<double> hs = shrink_steps(h0, x, opt.limits.max_samples);
    if (hs.empty())
        throw PreconditionError("no usable step size at " + double_str(x) +
                                " (x too large for the local cell width)");

    // Both samples share one h; perturbing h (not the individual samples)
    // keeps the quotient a true restriction of the defining limit.
    auto quotient = [&](double h) -> std::optional<double> {
        for (int tries = 0; tries < 4; ++tries) {
            if (detail::near_any(nearby, x + h, snap_tol) ||
                detail::near_any(nearby, x - h, snap_tol)) {
                h *= 1.0 - 1e-3;
                continue;
            }
            break;
        }
        OneSidedPair fu = f.one_sided(x + h), fd = f.one_sided(x - h);
        OneSidedPair au = alpha.one_sided(x + h), ad = alpha.one_sided(x - h);
        double num, den;
        if (opt.symmetric) {
            num = fu.right.finite() - fd.left.finite();
            den = au.right.finite() - ad.left.finite();
        } else {
            num = fu.left.finite() - fd.right.finite();
            den = au.left.finite() - ad.right.finite();
        }
        if (!(den > 0)) return std::nullopt;
        double q = num / den;
        if (!std::isfinite(q)) return std::nullopt;
        return q;
    };

    {
        // alpha must actually increase across x for the quotient to be sampled
        OneSidedPair au = alpha.one_sided(x + hs.front());
        OneSidedPair ad = alpha.one_sided(x - hs.front());
        double den0 = opt.symmetric ? au.right.finite() - ad.left.finite()
                                    : au.left.finite() - ad.right.finite();
        if (!(den0 > 0))
            throw PreconditionError("alpha is not strictly increasing near " + double_str(x));
    }

    LimitEstimate est = estimate_limit(
        [&](int k) -> std::optional<double> {
            if (k >= static_cast<int>(hs.size())) return std::nullopt;
            return quotient(hs[static_cast<std::size_t>(k)]);
        },
        opt.limits);

    switch (est.status) {
        case LimitStatus::converged:
            return DerivativeResult{est.value, DerivMethod::numeric_limit, est};
        case LimitStatus::diverged_pos:
            return DerivativeResult{ExtReal::pos_inf(), DerivMethod::numeric_limit, est};
        case LimitStatus::diverged_neg:
            return DerivativeResult{ExtReal::neg_inf(), DerivMethod::numeric_limit, est};
        default:
            throw DerivativeError("derivative limit at " + double_str(x) + " did not settle (" +
                                      limit_status_name(est.status) +
                                      (est.note.empty() ? "" : "; " + est.note) + ")",
                                  est);
    }
}

struct SymmetricCheck {
    DerivativeResult primary;    // defining orientation
    DerivativeResult secondary;  // f+(x+h) - f-(x-h) orientation
    bool agree = false;
};

// Evaluates the equivalent difference quotient with the opposite one-sided
// pairing and reports whether the two derivatives match.
template <RegulatedFn F, RegulatedFn A>
SymmetricCheck d_alpha_symmetric_check(const F& f, const A& alpha, double x,
                                       const DAlphaOptions& opt = {}) {
    DAlphaOptions prim = opt;
    prim.symmetric = false;
    DAlphaOptions sec = opt;
    sec.symmetric = true;
    sec.allow_shortcut = false;  // force the alternative quotient to be sampled
    SymmetricCheck out;
    out.primary = d_alpha(f, alpha, x, prim);
    out.secondary = d_alpha(f, alpha, x, sec);
    out.agree = rule_close(out.primary.value, out.secondary.value);
    return out;
}

// ---- piecewise products and quotients ------------------------------------------

namespace detail {

inline PiecewiseFn pw_combine(const PiecewiseFn& f, const PiecewiseFn& g, bool divide,
                              const ValidateOptions& vo) {
    if (!f.families().empty() || !g.families().empty())
        throw PreconditionError("products and quotients are built for finite-piece functions only");
    ExtReal a = std::max(f.domain_a(), g.domain_a());
    ExtReal b = std::min(f.domain_b(), g.domain_b());
    if (!(a < b)) throw PreconditionError("domains do not overlap");

    std::vector<double> cuts;
    auto collect = [&](const PiecewiseFn& h) {
        for (const Piece& p : h.pieces())
            if (ExtReal(p.right) > a && ExtReal(p.right) < b) cuts.push_back(p.right);
    };
    collect(f);
    collect(g);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> edges;
    edges.push_back(a.raw());
    for (double c : cuts)
        if (edges.empty() || c - edges.back() > join_tol(c)) edges.push_back(c);
    edges.push_back(b.raw());

    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double l = edges[i], r = edges[i + 1];
        double mid;
        if (std::isinf(l) && std::isinf(r)) mid = 0;
        else if (std::isinf(l)) mid = r - 1;
        else if (std::isinf(r)) mid = l + 1;
        else mid = 0.5 * (l + r);
        Expr bf = f.locate(mid).body;
        Expr bg = g.locate(mid).body;
        pieces.push_back(Piece{l, r, divide ? Expr::div(bf, bg) : Expr::mul(bf, bg)});
    }
    return PiecewiseFn(a, b, std::move(pieces), {}, vo);
}

}  // namespace detail

inline PiecewiseFn pw_mul(const PiecewiseFn& f, const PiecewiseFn& g,
                          const ValidateOptions& vo = {}) {
    return detail::pw_combine(f, g, false, vo);
}
inline PiecewiseFn pw_div(const PiecewiseFn& f, const PiecewiseFn& g,
                          const ValidateOptions& vo = {}) {
    return detail::pw_combine(f, g, true, vo);
}

// ---- product and quotient rules -------------------------------------------------

struct RuleTriple {
    ExtReal lhs = ExtReal(0.0);   // derivative of the combined function
    ExtReal rhs1 = ExtReal(0.0);  // first displayed form
    ExtReal rhs2 = ExtReal(0.0);  // second displayed form
    bool agree = false;
};

// D_a(fg) = g-(x) (D_a f)(x) + f+(x) (D_a g)(x)
//         = g+(x) (D_a f)(x) + f-(x) (D_a g)(x)
inline RuleTriple product_rule(const PiecewiseFn& f, const PiecewiseFn& g,
                               const PiecewiseFn& alpha, double x, const DAlphaOptions& opt = {}) {
    PiecewiseFn fg = pw_mul(f, g);
    ExtReal df = d_alpha(f, alpha, x, opt).value;
    ExtReal dg = d_alpha(g, alpha, x, opt).value;
    OneSidedPair fp = f.one_sided(x), gp = g.one_sided(x);
    RuleTriple out;
    out.lhs = d_alpha(fg, alpha, x, opt).value;
    out.rhs1 = gp.left * df + fp.right * dg;
    out.rhs2 = gp.right * df + fp.left * dg;
    out.agree = rule_close(out.lhs, out.rhs1) && rule_close(out.lhs, out.rhs2);
    return out;
}

// D_a(f/g) = [g-(x) (D_a f)(x) - f-(x) (D_a g)(x)] / [g-(x) g+(x)]
//          = [g+(x) (D_a f)(x) - f+(x) (D_a g)(x)] / [g-(x) g+(x)]
// provided g-(x) g+(x) != 0.
inline RuleTriple quotient_rule(const PiecewiseFn& f, const PiecewiseFn& g,
                                const PiecewiseFn& alpha, double x,
                                const DAlphaOptions& opt = {}) {
    OneSidedPair gp = g.one_sided(x);
    double gl = gp.left.finite(), gr = gp.right.finite();
    double gscale = std::max(std::abs(gl), std::abs(gr));
    if (std::abs(gl) <= 1e-12 * (1.0 + gscale) || std::abs(gr) <= 1e-12 * (1.0 + gscale))
        throw PreconditionError("quotient rule needs g-(x) g+(x) != 0 at " + double_str(x));

    PiecewiseFn fq = pw_div(f, g);
    ExtReal df = d_alpha(f, alpha, x, opt).value;
    ExtReal dg = d_alpha(g, alpha, x, opt).value;
    OneSidedPair fp = f.one_sided(x);
    ExtReal denom = gp.left * gp.right;
    RuleTriple out;
    out.lhs = d_alpha(fq, alpha, x, opt).value;
    out.rhs1 = (gp.left * df - fp.left * dg) / denom;
    out.rhs2 = (gp.right * df - fp.right * dg) / denom;
    out.agree = rule_close(out.lhs, out.rhs1) && rule_close(out.lhs, out.rhs2);
    return out;
}

}  // namespace regcalc
