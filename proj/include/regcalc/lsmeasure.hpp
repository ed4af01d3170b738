#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ext_real.hpp"
#include "lhospital.hpp"
#include "limit_engine.hpp"
#include "piecewise.hpp"
#include "quadrature.hpp"
#include "stieltjes.hpp"

// The measure induced by an increasing regulated integrator: open intervals
// weigh alpha-(t) - alpha+(s), jumps are point masses. Provides integrals
// against that measure, the fundamental-theorem residual check, and the
// integral forms of the quotient-limit and quotient-monotonicity rules.

namespace regcalc {

struct MassAtom {
    double x = 0;
    double mass = 0;
};

class LSMeasure {
public:
    explicit LSMeasure(PiecewiseFn base, double tol = 1e-9)
        : base_(std::move(base)), tol_(tol) {
        spot_validate();
    }

    const PiecewiseFn& base() const { return base_; }
    double atom_tol() const { return tol_; }

    // mu((s,t)) for a <= s < t <= b: alpha-(t) - alpha+(s). Atoms exactly at
    // s or t are outside the open interval and do not count.
    double measure_interval(double s, double t) const {
        if (!(s < t)) throw DomainError("interval bounds out of order");
        if (!(ExtReal(s) >= base_.domain_a()) || !(ExtReal(t) <= base_.domain_b()))
            throw DomainError("interval outside the integrator domain");
        return left_limit_at(t) - right_limit_at(s);
    }

    // Point masses strictly inside (s,t), ascending. Enumerates cells, so a
    // range spanning more than cell_cap cells is refused rather than
    // silently truncated.
    std::vector<MassAtom> atoms_in(double s, double t, std::size_t cell_cap = 4096) const {
        std::vector<MassAtom> out;
        for (double q : junctions_in(s, t, cell_cap)) {
            OneSidedPair p = base_.one_sided(q);
            double mass = (p.right - p.left).finite();
            if (mass > tol_) out.push_back(MassAtom{q, mass});
        }
        return out;
    }

    // Junction locations strictly inside (s,t) from a full cell walk.
    std::vector<double> junctions_in(double s, double t, std::size_t cell_cap = 4096) const {
        std::vector<double> out;
        if (!(s < t)) return out;
        for (const Cell& c : base_.cells_in(s, t, cell_cap))
            if (c.right > s && c.right < t && ExtReal(c.right) < base_.domain_b())
                out.push_back(c.right);
        return out;
    }

    // d(alpha)/dx inside a cell; none at kinks or where no symbolic
    // derivative is available.
    std::optional<double> density_at(double x) const { return base_.derivative_left(x); }

    double left_limit_at(double t) const {
        ExtReal b = base_.domain_b();
        if (ExtReal(t) < b) return base_.one_sided(t).left.finite();
        double v = base_.locate(t).eval(t);
        if (!std::isfinite(v)) throw EvalError("integrator has no finite limit at upper bound");
        return v;
    }

    double right_limit_at(double s) const {
        ExtReal a = base_.domain_a();
        if (ExtReal(s) > a) return base_.one_sided(s).right.finite();
        double probe = std::nextafter(s, std::numeric_limits<double>::infinity());
        double v = base_.locate(probe).eval(s);
        if (!std::isfinite(v)) throw EvalError("integrator has no finite limit at lower bound");
        return v;
    }

private:
    PiecewiseFn base_;
    double tol_;

    // Monotonicity is sampled, not proved: junction jumps along a geometric
    // anchor sweep must be >= -tol and interior densities >= -tol.
    void spot_validate() const {
        std::vector<double> anchors = interval_schedule(base_.domain_a(), base_.domain_b(),
                                                        Endpoint::upper);
        std::vector<double> back = interval_schedule(base_.domain_a(), base_.domain_b(),
                                                     Endpoint::lower);
        if (back.size() > 8) back.resize(8);
        anchors.insert(anchors.end(), back.begin(), back.end());
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
        for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
            double p = anchors[i], q = anchors[i + 1];
            double mid = p + (q - p) * 0.5;
            if (auto d = base_.derivative_left(mid); d && *d < -tol_)
                throw ConstructionError("integrator decreasing near x=" + double_str(mid));
            for (double j : base_.breakpoints_in(p, q, 8)) {
                OneSidedPair os = base_.one_sided(j);
                if ((os.right - os.left).finite() < -tol_)
                    throw ConstructionError("integrator has a negative jump at x=" +
                                            double_str(j));
            }
        }
    }
};

// integral of fx against m over the open interval (s,t): panels split at
// every cell boundary of the integrator plus extra_breaks, then point
// masses weighted by the integrand's value there. atom_value(a) must return
// the integrand's value at a.x (the mass factor is applied here).
inline QuadResult integrate_ls(const std::function<double(double)>& fx, const LSMeasure& m,
                               double s, double t,
                               const std::function<double(const MassAtom&)>& atom_value,
                               const std::vector<double>& extra_breaks = {},
                               const QuadOptions& qo = {}) {
    QuadResult out;
    if (!(s < t)) {
        if (s == t) return out;
        throw DomainError("integration bounds out of order");
    }
    if (!(ExtReal(s) >= m.base().domain_a()) || !(ExtReal(t) <= m.base().domain_b()))
        throw DomainError("integration interval outside the integrator domain");

    std::vector<double> cuts{s, t};
    for (double q : m.junctions_in(s, t)) cuts.push_back(q);
    for (double q : extra_breaks)
        if (q > s && q < t) cuts.push_back(q);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double l = cuts[i], r = cuts[i + 1];
        if (!(l < r)) continue;
        auto g = [&](double x) -> double {
            auto d = m.density_at(x);
            if (!d)
                throw QuadratureError("integrator density unavailable at x=" + double_str(x));
            return fx(x) * *d;
        };
        QuadResult part = integrate_adaptive(g, l, r, qo);
        double allow = 1e3 * (qo.abs_tol + qo.rel_tol * std::abs(part.value)) +
                       1e-9 * (1 + std::abs(part.value));
        if (part.err_estimate > allow)
            throw QuadratureError("integral did not converge on cell [" +
                                  double_str(l) + ", " + double_str(r) +
                                  "]: err=" + double_str(part.err_estimate));
        out.value += part.value;
        out.err_estimate += part.err_estimate;
        out.intervals += part.intervals;
    }

    for (const MassAtom& a : m.atoms_in(s, t)) out.value += atom_value(a) * a.mass;
    return out;
}

// integral of a regulated function against m, with panels split at the
// integrand's own junctions too.
template <RegulatedFn F>
QuadResult integrate_ls(const F& f, const LSMeasure& m, double s, double t,
                        const QuadOptions& qo = {}) {
    return integrate_ls([&](double x) { return f.value_at(x); }, m, s, t,
                        [&](const MassAtom& a) { return f.value_at(a.x); },
                        f.breakpoints_in(s, t), qo);
}

// ---- fundamental-theorem residual ----------------------------------------------

struct FtcOptions {
    double ac_tol = 1e-9;        // jump sizes below this (relative) are noise
    double residual_rtol = 1e-6;
    DAlphaOptions dalpha;
    QuadOptions quad;
};

struct FtcResult {
    double lhs = 0;  // h-(t) - h+(s)
    double rhs = 0;  // integral of D_a h against d(alpha) over (s,t)
    double residual = 0;
    bool ok = false;
    QuadResult quad;
};

// Verifies h-(t) - h+(s) = integral of (D_a h) d(alpha) on (s,t). Every
// significant jump of h inside (s,t) must sit on a point mass of d(alpha);
// otherwise the d(h) << d(alpha) requirement fails and this throws
// ACViolationError. The derivative under the integral is evaluated
// pointwise; at a shared jump it is the jump ratio, whose mass-weighted
// contribution telescopes exactly.
template <RegulatedFn H>
FtcResult ftc_check(const H& h, const PiecewiseFn& alpha, double s, double t,
                    const FtcOptions& opt = {}) {
    ExtReal a = alpha.domain_a(), b = alpha.domain_b();
    if (h.domain_a() > a) a = h.domain_a();
    if (h.domain_b() < b) b = h.domain_b();
    if (!(ExtReal(s) > a) || !(ExtReal(t) < b) || !(s < t))
        throw DomainError("need a < s < t < b inside the joint domain");

    LSMeasure m(alpha, opt.ac_tol);

    // absolute-continuity of d(h) against d(alpha)
    for (const Breakpoint& bp : breakpoints(h, s, t)) {
        OneSidedPair hp = h.one_sided(bp.x);
        double scale = std::max(std::abs(hp.left.finite()), std::abs(hp.right.finite()));
        if (std::abs(bp.jump) <= opt.ac_tol * (1 + scale)) continue;
        OneSidedPair ap = alpha.one_sided(bp.x);
        if ((ap.right - ap.left).finite() <= m.atom_tol())
            throw ACViolationError("jump of the integrand at x=" + double_str(bp.x) +
                                       " carries no integrator mass",
                                   bp.x);
    }

    FtcResult out;
    out.quad = integrate_ls(
        [&](double x) { return d_alpha(h, alpha, x, opt.dalpha).value.finite(); }, m, s, t,
        [&](const MassAtom& at) { return d_alpha(h, alpha, at.x, opt.dalpha).value.finite(); },
        h.breakpoints_in(s, t), opt.quad);
    out.rhs = out.quad.value;
    OneSidedPair pt = h.one_sided(t), ps = h.one_sided(s);
    out.lhs = pt.left.finite() - ps.right.finite();
    out.residual = std::abs(out.lhs - out.rhs);
    out.ok = out.residual <= opt.residual_rtol * (1 + std::abs(out.lhs));
    return out;
}

// ---- integral forms of the quotient rules ---------------------------------------

namespace detail {

// f's value at x weighted by the point mass there, if any.
inline double atom_term(const PiecewiseFn& f, const LSMeasure& m, double x) {
    OneSidedPair ap = m.base().one_sided(x);
    double mass = (ap.right - ap.left).finite();
    return mass > m.atom_tol() ? f.value_at(x) * mass : 0.0;
}

// Cumulative mu-integrals of f over the open interval between pts[0] and
// pts[i], for pts monotone in either direction (ascending toward an upper
// endpoint, descending toward a lower one). Point masses sitting exactly on
// interior pts are picked up when the union extends past them.
inline std::vector<double> cumulative_ls(const PiecewiseFn& f, const LSMeasure& m,
                                         const std::vector<double>& pts,
                                         const QuadOptions& qo) {
    std::vector<double> out;
    out.reserve(pts.size());
    out.push_back(0.0);
    double acc = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double l = std::min(pts[i - 1], pts[i]), r = std::max(pts[i - 1], pts[i]);
        if (i >= 2) acc += atom_term(f, m, pts[i - 1]);
        acc += integrate_ls(f, m, l, r, qo).value;
        out.push_back(acc);
    }
    return out;
}

inline Hypothesis check_sign_constant_ae(const PiecewiseFn& v, const PiecewiseFn& alpha,
                                         const std::vector<double>& grid, double atom_tol) {
    Hypothesis h{"v keeps one sign d(alpha)-a.e.", HypothesisStatus::verified_on_grid, ""};
    bool any_pos = false, any_neg = false;
    auto take = [&](double x) -> bool {
        double vv;
        try {
            vv = v.value_at(x);
        } catch (const Error&) {
            return true;  // isolated evaluation gaps are measure-negligible
        }
        if (vv > 0) any_pos = true;
        else if (vv < 0) any_neg = true;
        else {
            h.status = HypothesisStatus::failed;
            h.evidence = "vanishes at x=" + double_str(x);
            return false;
        }
        if (any_pos && any_neg) {
            h.status = HypothesisStatus::failed;
            h.evidence = "sign change by x=" + double_str(x);
            return false;
        }
        return true;
    };
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!take(0.5 * (grid[i] + grid[i + 1]))) return h;
        // point masses weigh the value at the junction itself
        OneSidedPair ap = alpha.one_sided(grid[i]);
        if ((ap.right - ap.left).finite() > atom_tol && !take(grid[i])) return h;
    }
    h.evidence = std::string(any_pos ? "positive" : "negative") + " on " +
                 std::to_string(grid.size()) + " grid cells";
    return h;
}

}  // namespace detail

// Decides lim of the integral ratio toward the endpoint from lim u/v:
// either tail integrals (v integrable toward the endpoint) or cumulative
// integrals from an anchor (v's integral diverges). The oracle samples the
// corresponding integral ratio directly.
inline RuleReport lhospital_integral(const PiecewiseFn& u, const PiecewiseFn& v,
                                     const PiecewiseFn& alpha, Endpoint endpoint,
                                     const LHospitalOptions& opt = {},
                                     const QuadOptions& quad = QuadOptions{1e-12, 1e-12,
                                                                           32768}) {
    auto [a, b] = detail::joint_domain(u, v, alpha);
    RuleReport rep;

    LSMeasure m(alpha, opt.dalpha.jump_rel + 1e-9);

    std::vector<double> grid =
        detail::hypothesis_grid(v, alpha, a, b, endpoint, opt.junctions_per_octave);
    if (grid.size() < 2) throw DomainError("interval too small to sample");
    rep.hypotheses.push_back(detail::check_alpha_increasing(alpha, grid));
    rep.hypotheses.push_back(detail::check_sign_constant_ae(v, alpha, grid, m.atom_tol()));

    // w = u/v limit at the endpoint: the rule's source
    std::vector<double> xs = interval_schedule(a, b, endpoint);
    LimitOptions ro = opt.limits;
    ro.max_samples = std::min<int>(ro.max_samples, static_cast<int>(xs.size()));
    LimitEstimate wlim = estimate_limit(
        [&](int k) -> std::optional<double> {
            if (k >= static_cast<int>(xs.size())) return std::nullopt;
            double x = xs[static_cast<std::size_t>(k)];
            double den = v.value_at(x);
            if (den == 0) return std::nullopt;
            double q = u.value_at(x) / den;
            return std::isfinite(q) ? std::optional<double>(q) : std::nullopt;
        },
        ro);
    rep.rule_limit = wlim;
    {
        Hypothesis h{"u/v has a limit at the endpoint", HypothesisStatus::verified_on_grid, ""};
        if (wlim.status == LimitStatus::converged || wlim.status == LimitStatus::diverged_pos ||
            wlim.status == LimitStatus::diverged_neg) {
            h.evidence = limit_status_name(wlim.status);
        } else {
            h.status = HypothesisStatus::failed;
            h.evidence = std::string(limit_status_name(wlim.status)) +
                         (wlim.note.empty() ? "" : "; " + wlim.note);
        }
        rep.hypotheses.push_back(h);
    }

    // cumulative integrals from the anchor xs[0] along the schedule
    std::vector<double> ucum, vcum;
    std::string block_err;
    try {
        ucum = detail::cumulative_ls(u, m, xs, quad);
        vcum = detail::cumulative_ls(v, m, xs, quad);
    } catch (const Error& e) {
        block_err = e.what();
    }
    {
        Hypothesis h{"u, v locally integrable against d(alpha)",
                     HypothesisStatus::verified_on_grid, ""};
        if (!block_err.empty()) {
            h.status = HypothesisStatus::failed;
            h.evidence = block_err;
        } else {
            h.evidence = std::to_string(xs.size() - 1) + " schedule blocks";
        }
        rep.hypotheses.push_back(h);
    }
    if (!block_err.empty()) {
        rep.case_name = "none";
        return rep;
    }

    LimitOptions wo = opt.witness_limits();
    wo.max_samples = static_cast<int>(vcum.size());
    LimitEstimate vtot = estimate_limit(
        [&](int k) -> std::optional<double> {
            if (k >= static_cast<int>(vcum.size())) return std::nullopt;
            return vcum[static_cast<std::size_t>(k)];
        },
        wo);

    LimitEstimate oracle;
    if (vtot.status == LimitStatus::diverged_pos || vtot.status == LimitStatus::diverged_neg) {
        rep.case_name = "statement-2-cumulative";
        oracle = estimate_limit(
            [&](int k) -> std::optional<double> {
                if (k >= static_cast<int>(vcum.size())) return std::nullopt;
                double den = vcum[static_cast<std::size_t>(k)];
                if (den == 0) return std::nullopt;
                double q = ucum[static_cast<std::size_t>(k)] / den;
                return std::isfinite(q) ? std::optional<double>(q) : std::nullopt;
            },
            wo);
        rep.hypotheses.push_back(Hypothesis{"integral of v diverges toward the endpoint",
                                            HypothesisStatus::verified_on_grid,
                                            limit_status_name(vtot.status)});
    } else if (vtot.status == LimitStatus::converged) {
        rep.case_name = "statement-1-tails";
        rep.hypotheses.push_back(Hypothesis{"integral of v converges toward the endpoint",
                                            HypothesisStatus::verified_on_grid,
                                            "cumulative integral stabilized"});
        bool fin = (endpoint == Endpoint::upper && b.is_finite()) ||
                   (endpoint == Endpoint::lower && a.is_finite());
        // Tail over (x_k, endpoint) = total over (x_0, endpoint) minus the
        // cumulative part minus the point mass at x_k itself.
        auto tail_sampler = [&](double utot, double vtot_v, double floor_v) {
            return [&, utot, vtot_v, floor_v](int k) -> std::optional<double> {
                if (k >= static_cast<int>(vcum.size())) return std::nullopt;
                double x = xs[static_cast<std::size_t>(k)];
                double au = k > 0 ? detail::atom_term(u, m, x) : 0.0;
                double av = k > 0 ? detail::atom_term(v, m, x) : 0.0;
                double den = vtot_v - vcum[static_cast<std::size_t>(k)] - av;
                if (den == 0 || std::abs(den) < floor_v) return std::nullopt;
                double q = (utot - ucum[static_cast<std::size_t>(k)] - au) / den;
                return std::isfinite(q) ? std::optional<double>(q) : std::nullopt;
            };
        };
        if (fin) {
            // exact totals reach the endpoint directly
            double edge = endpoint == Endpoint::upper ? b.raw() : a.raw();
            double xlast = xs.back();
            double lo = std::min(xlast, edge), hi = std::max(xlast, edge);
            double ulast = integrate_ls(u, m, lo, hi, quad).value + detail::atom_term(u, m, xlast);
            double vlast = integrate_ls(v, m, lo, hi, quad).value + detail::atom_term(v, m, xlast);
            oracle = estimate_limit(tail_sampler(ucum.back() + ulast, vcum.back() + vlast, 0.0),
                                    wo);
        } else {
            // totals extrapolated; tails cut off where truncation noise
            // takes over
            LimitEstimate utot_est = estimate_limit(
                [&](int k) -> std::optional<double> {
                    if (k >= static_cast<int>(ucum.size())) return std::nullopt;
                    return ucum[static_cast<std::size_t>(k)];
                },
                wo);
            if (utot_est.status != LimitStatus::converged) {
                rep.hypotheses.push_back(
                    Hypothesis{"integral of u converges toward the endpoint",
                               HypothesisStatus::failed, limit_status_name(utot_est.status)});
            } else {
                double vtot_v = vtot.value.raw();
                double floor_v = 1e3 * (vtot.err_estimate + 1e-15 * std::abs(vtot_v));
                oracle = estimate_limit(tail_sampler(utot_est.value.raw(), vtot_v, floor_v),
                                        wo);
            }
        }
    } else {
        rep.case_name = "none";
        rep.hypotheses.push_back(Hypothesis{"integrability class of v",
                                            HypothesisStatus::failed,
                                            limit_status_name(vtot.status)});
    }
    rep.oracle_limit = oracle;

    rep.applicable = !rep.hypothesis_failed() && rep.case_name != "none";
    if (rep.applicable) {
        rep.conclusion = wlim.status == LimitStatus::converged ? wlim.value
                         : wlim.status == LimitStatus::diverged_pos ? ExtReal::pos_inf()
                                                                    : ExtReal::neg_inf();
        rep.agree = detail::limits_agree(*rep.conclusion, oracle, opt.agree_rtol);
    }
    return rep;
}

// Certifies monotonicity of x -> (integral of u over (a,x)) / (integral of
// v over (a,x)) from monotonicity of u/v, with a direct grid oracle.
inline RuleReport monotone_integral(const PiecewiseFn& u, const PiecewiseFn& v,
                                    const PiecewiseFn& alpha,
                                    const LHospitalOptions& opt = {},
                                    const QuadOptions& quad = QuadOptions{1e-12, 1e-12,
                                                                          32768}) {
    auto [a, b] = detail::joint_domain(u, v, alpha);
    if (!a.is_finite())
        throw PreconditionError("prefix integrals need a finite lower endpoint");
    RuleReport rep;
    rep.case_name = "prefix-ratio";

    LSMeasure m(alpha, opt.dalpha.jump_rel + 1e-9);

    std::vector<double> grid =
        detail::hypothesis_grid(v, alpha, a, b, Endpoint::upper, opt.junctions_per_octave);
    if (grid.size() < 3) throw DomainError("interval too small to sample");
    rep.hypotheses.push_back(detail::check_alpha_increasing(alpha, grid));
    rep.hypotheses.push_back(detail::check_sign_constant_ae(v, alpha, grid, m.atom_tol()));

    // direction of w = u/v across the grid
    {
        std::vector<double> ws;
        for (double x : grid) {
            double den, num;
            try {
                den = v.value_at(x);
                num = u.value_at(x);
            } catch (const Error&) {
                continue;
            }
            if (den == 0) continue;
            double w = num / den;
            if (std::isfinite(w)) ws.push_back(w);
        }
        Hypothesis h{"u/v monotone", HypothesisStatus::verified_on_grid, ""};
        if (ws.size() < 3) {
            h.status = HypothesisStatus::failed;
            h.evidence = "too few ratio samples";
        } else {
            double wscale = 0;
            for (double w : ws) wscale = std::max(wscale, std::abs(w));
            double mg = opt.grid_tol * (1 + wscale);
            bool nondecr = true, nonincr = true, strict_inc = true, strict_dec = true;
            for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
                double d = ws[i + 1] - ws[i];
                if (d < -mg) nondecr = false;
                if (d > mg) nonincr = false;
                if (!(d > mg)) strict_inc = false;
                if (!(d < -mg)) strict_dec = false;
            }
            if (strict_inc) rep.certificate = "strictly-increasing";
            else if (nondecr) rep.certificate = "nondecreasing";
            else if (strict_dec) rep.certificate = "strictly-decreasing";
            else if (nonincr) rep.certificate = "nonincreasing";
            if (rep.certificate) {
                h.evidence = *rep.certificate + " over " + std::to_string(ws.size()) +
                             " samples";
            } else {
                h.status = HypothesisStatus::failed;
                h.evidence = "no direction fits the sampled ratio";
            }
        }
        rep.hypotheses.push_back(h);
    }

    // oracle: the prefix-integral ratio itself along the grid
    {
        std::vector<double> pts{a.raw()};
        pts.insert(pts.end(), grid.begin(), grid.end());
        std::vector<double> hu, hv;
        try {
            hu = detail::cumulative_ls(u, m, pts, quad);
            hv = detail::cumulative_ls(v, m, pts, quad);
        } catch (const Error& e) {
            rep.hypotheses.push_back(Hypothesis{"u, v integrable from the lower endpoint",
                                                HypothesisStatus::failed, e.what()});
            return rep;
        }
        bool increasing = !rep.certificate || (*rep.certificate == "strictly-increasing" ||
                                               *rep.certificate == "nondecreasing");
        GridVerdict gv;
        gv.property = increasing ? "nondecreasing" : "nonincreasing";
        std::vector<double> hs, hx;
        for (std::size_t i = 1; i < hu.size(); ++i) {
            double den = hv[i];
            if (std::abs(den) < 1e-300) continue;
            double r = hu[i] / den;
            if (!std::isfinite(r)) continue;
            hs.push_back(r);
            hx.push_back(pts[i]);
        }
        double rscale = 0;
        for (double r : hs) rscale = std::max(rscale, std::abs(r));
        double mg = opt.grid_tol * (1 + rscale);
        for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
            ++gv.checked;
            double d = hs[i + 1] - hs[i];
            double against = increasing ? -d : d;
            if (against > mg) {
                ++gv.violations;
                if (against > gv.worst_violation) {
                    gv.worst_violation = against;
                    gv.worst_x = hx[i + 1];
                }
            }
        }
        rep.oracle_grid = gv;
    }

    rep.applicable = !rep.hypothesis_failed() && rep.certificate.has_value();
    rep.agree = rep.applicable && rep.oracle_grid && rep.oracle_grid->ok();
    return rep;
}

}  // namespace regcalc
