#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ext_real.hpp"
#include "piecewise.hpp"
#include "stieltjes.hpp"

// Mean-value witnesses for regulated functions. The derivative D_a has no
// intermediate value property, so sign bisection is unsound; witnesses are
// taken as the extremal points of the derivative (or of the displayed Cauchy
// combination) over midpoint-offset grids with all junctions added, doubling
// the resolution until the witness product is nonpositive.

namespace regcalc {

struct WitnessPair {
    double u = 0, v = 0;          // witness points in (s,t)
    double lhs_value = 0;         // evaluated expression at u
    double rhs_value = 0;         // evaluated expression at v
    double product = 0;           // lhs_value * rhs_value (sign-exact)
    int grid_resolution = 0;
};

struct WitnessOptions {
    int initial_resolution = 64;
    int max_resolution = 8192;
    double tol = 1e-9;                  // witness product must be <= tol
    double precondition_rtol = 1e-9;    // endpoint-match tolerance (Rolle)
    double max_failure_fraction = 0.2;  // grid points allowed to lack a derivative
    DAlphaOptions dalpha;
};

namespace detail {

// Midpoint-offset uniform grid over (s,t) plus every junction of f and
// alpha; junctions carry the jump-ratio derivatives that extremes often
// sit on, the offset keeps the uniform points off the junctions.
template <RegulatedFn F, RegulatedFn A>
std::vector<double> witness_grid(const F& f, const A& alpha, double s, double t, int n) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n) + 64);
    for (int i = 0; i < n; ++i)
        xs.push_back(s + (t - s) * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    for (double q : f.breakpoints_in(s, t, 512)) xs.push_back(q);
    for (double q : alpha.breakpoints_in(s, t, 512)) xs.push_back(q);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

inline double signed_product(double a, double b) {
    if (a == 0 || b == 0) return 0;
    return a * b;  // infinities keep their sign; 0*inf is excluded above
}

template <RegulatedFn F, RegulatedFn A>
void check_interval(const F& f, const A& alpha, double s, double t) {
    ExtReal a = f.domain_a(), b = f.domain_b();
    if (alpha.domain_a() > a) a = alpha.domain_a();
    if (alpha.domain_b() < b) b = alpha.domain_b();
    if (!(ExtReal(s) > a) || !(ExtReal(t) < b) || !(s < t))
        throw DomainError("need a < s < t < b, got s=" + double_str(s) + ", t=" + double_str(t));
}

// Evaluates expr(x) over the grid and returns the extremal points; expr may
// fail at some points (missing derivative), bounded by the failure budget.
struct GridExtremes {
    double min_x = 0, min_v = 0, max_x = 0, max_v = 0;
    int evaluated = 0;
};

template <class Eval>
GridExtremes grid_extremes(const std::vector<double>& xs, double max_failure_fraction,
                           Eval eval) {
    GridExtremes ge;
    ge.min_v = std::numeric_limits<double>::infinity();
    ge.max_v = -std::numeric_limits<double>::infinity();
    int failures = 0;
    std::string first_failure;
    for (double x : xs) {
        double v;
        try {
            v = eval(x);
        } catch (const Error& e) {
            ++failures;
            if (first_failure.empty())
                first_failure = "at " + double_str(x) + ": " + e.what();
            continue;
        }
        if (std::isnan(v)) {
            ++failures;
            if (first_failure.empty()) first_failure = "at " + double_str(x) + ": undefined";
            continue;
        }
        ++ge.evaluated;
        if (v < ge.min_v || ge.evaluated == 1) {
            ge.min_v = v;
            ge.min_x = x;
        }
        if (v > ge.max_v || ge.evaluated == 1) {
            ge.max_v = v;
            ge.max_x = x;
        }
    }
    if (failures > max_failure_fraction * static_cast<double>(xs.size()) || ge.evaluated == 0)
        throw PreconditionError("derivative missing on " + std::to_string(failures) + " of " +
                                std::to_string(xs.size()) + " grid points (first " +
                                first_failure + ")");
    return ge;
}

}  // namespace detail

// Witnesses u, v with (D_a f)(u) (D_a f)(v) <= 0, given f+(s) = f-(t).
template <RegulatedFn F, RegulatedFn A>
WitnessPair rolle_witness(const F& f, const A& alpha, double s, double t,
                          const WitnessOptions& opt = {}) {
    detail::check_interval(f, alpha, s, t);
    double fs = f.one_sided(s).right.finite();
    double ft = f.one_sided(t).left.finite();
    if (std::abs(fs - ft) > opt.precondition_rtol * (1.0 + std::abs(fs)))
        throw PreconditionError("endpoints do not match: f+(s)=" + double_str(fs) +
                                ", f-(t)=" + double_str(ft));

    for (int n = opt.initial_resolution; n <= opt.max_resolution; n *= 2) {
        std::vector<double> xs = detail::witness_grid(f, alpha, s, t, n);
        detail::GridExtremes ge =
            detail::grid_extremes(xs, opt.max_failure_fraction, [&](double x) {
                return d_alpha(f, alpha, x, opt.dalpha).value.raw();
            });
        double prod = detail::signed_product(ge.min_v, ge.max_v);
        if (prod <= opt.tol)
            return WitnessPair{ge.min_x, ge.max_x, ge.min_v, ge.max_v, prod, n};
    }
    throw WitnessNotFoundError("no derivative sign change found on (" + double_str(s) + ", " +
                                   double_str(t) + ")",
                               opt.max_resolution);
}

// Witnesses u, v for the Cauchy combination
//   E(x) = [g-(t) - g+(s)] (D_a f)(x) - [f-(t) - f+(s)] (D_a g)(x)
// with E(u) E(v) <= 0.
template <RegulatedFn F, RegulatedFn G, RegulatedFn A>
WitnessPair cauchy_witness(const F& f, const G& g, const A& alpha, double s, double t,
                           const WitnessOptions& opt = {}) {
    detail::check_interval(f, alpha, s, t);
    detail::check_interval(g, alpha, s, t);
    double gA = g.one_sided(t).left.finite() - g.one_sided(s).right.finite();
    double fB = f.one_sided(t).left.finite() - f.one_sided(s).right.finite();

    auto scaled = [](double c, double d) { return c == 0 ? 0.0 : c * d; };

    for (int n = opt.initial_resolution; n <= opt.max_resolution; n *= 2) {
        std::vector<double> xs = detail::witness_grid(f, alpha, s, t, n);
        for (double q : g.breakpoints_in(s, t, 512)) xs.push_back(q);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        detail::GridExtremes ge =
            detail::grid_extremes(xs, opt.max_failure_fraction, [&](double x) {
                double df = d_alpha(f, alpha, x, opt.dalpha).value.raw();
                double dg = d_alpha(g, alpha, x, opt.dalpha).value.raw();
                return scaled(gA, df) - scaled(fB, dg);  // NaN (inf-inf) skips the point
            });
        double prod = detail::signed_product(ge.min_v, ge.max_v);
        if (prod <= opt.tol)
            return WitnessPair{ge.min_x, ge.max_x, ge.min_v, ge.max_v, prod, n};
    }
    throw WitnessNotFoundError("no sign change of the Cauchy combination on (" + double_str(s) +
                                   ", " + double_str(t) + ")",
                               opt.max_resolution);
}

// Two-sided bound on the increment ratio by derivative-ratio extremes:
//   lo <= [f-(t) - f+(s)] / [g-(t) - g+(s)] <= hi
// where lo/hi are the grid extremes of (D_a f)/(D_a g), valid when D_a g has
// constant sign. When the derivative ratio is nondecreasing on the grid the
// sharper endpoint form ratio(s) <= mid <= ratio(t) is checked as well.
struct SandwichResult {
    double lo = 0, hi = 0, mid = 0;
    bool ok = false;
    bool ratio_monotone = false;   // derivative ratio nondecreasing on the grid
    bool endpoint_checked = false; // ratio(s), ratio(t) were computable
    double ratio_at_s = 0, ratio_at_t = 0;
    bool endpoint_ok = true;
    int grid_resolution = 0;
};

template <RegulatedFn F, RegulatedFn G, RegulatedFn A>
SandwichResult sandwich_check(const F& f, const G& g, const A& alpha, double s, double t,
                              const WitnessOptions& opt = {}) {
    detail::check_interval(f, alpha, s, t);
    detail::check_interval(g, alpha, s, t);
    int n = opt.initial_resolution * 8;
    std::vector<double> xs = detail::witness_grid(f, alpha, s, t, n);
    for (double q : g.breakpoints_in(s, t, 512)) xs.push_back(q);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> ratios;
    ratios.reserve(xs.size());
    int failures = 0;
    bool any_pos = false, any_neg = false;
    for (double x : xs) {
        double df, dg;
        try {
            df = d_alpha(f, alpha, x, opt.dalpha).value.raw();
            dg = d_alpha(g, alpha, x, opt.dalpha).value.raw();
        } catch (const Error&) {
            ++failures;
            continue;
        }
        if (dg > 0) any_pos = true;
        else if (dg < 0) any_neg = true;
        else throw PreconditionError("D_a g vanishes at " + double_str(x));
        if (any_pos && any_neg)
            throw PreconditionError("D_a g changes sign near " + double_str(x));
        double r = df / dg;
        if (std::isnan(r)) {
            ++failures;
            continue;
        }
        ratios.push_back(r);
    }
    if (failures > opt.max_failure_fraction * static_cast<double>(xs.size()) || ratios.empty())
        throw PreconditionError("derivative ratio missing on " + std::to_string(failures) +
                                " of " + std::to_string(xs.size()) + " grid points");

    SandwichResult out;
    out.grid_resolution = n;
    out.lo = *std::min_element(ratios.begin(), ratios.end());
    out.hi = *std::max_element(ratios.begin(), ratios.end());

    double fs = f.one_sided(s).right.finite(), ft = f.one_sided(t).left.finite();
    double gs = g.one_sided(s).right.finite(), gt = g.one_sided(t).left.finite();
    double den = gt - gs;
    if (std::abs(den) <= 1e-300)
        throw PreconditionError("g-(t) equals g+(s); increment ratio undefined");
    out.mid = (ft - fs) / den;

    double tolm = opt.tol * (1.0 + std::abs(out.mid));
    out.ok = (out.lo - tolm <= out.mid) && (out.mid <= out.hi + tolm);

    out.ratio_monotone = true;
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i) {
        double scale = std::max(std::abs(ratios[i]), std::abs(ratios[i + 1]));
        double m = opt.tol * (1.0 + (std::isfinite(scale) ? scale : 0.0));
        if (ratios[i + 1] < ratios[i] - m) {
            out.ratio_monotone = false;
            break;
        }
    }
    if (out.ratio_monotone) {
        try {
            double rs = d_alpha(f, alpha, s, opt.dalpha).value.raw() /
                        d_alpha(g, alpha, s, opt.dalpha).value.raw();
            double rt = d_alpha(f, alpha, t, opt.dalpha).value.raw() /
                        d_alpha(g, alpha, t, opt.dalpha).value.raw();
            if (!std::isnan(rs) && !std::isnan(rt)) {
                out.endpoint_checked = true;
                out.ratio_at_s = rs;
                out.ratio_at_t = rt;
                out.endpoint_ok = (rs <= out.mid + tolm) && (out.mid <= rt + tolm);
            }
        } catch (const Error&) {
            // endpoint derivative unavailable; the main bound already stands
        }
    }
    return out;
}

}  // namespace regcalc
