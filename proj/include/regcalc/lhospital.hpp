#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ext_real.hpp"
#include "limit_engine.hpp"
#include "piecewise.hpp"
#include "stieltjes.hpp"

// Limits of quotients f-/g- decided through the derivative ratio
// (D_a f)/(D_a g), and monotonicity certificates for f-/g- from the
// monotonicity of that ratio. Every rule run carries its hypothesis
// verdicts (grid-verified, never proved) and an independent oracle that
// samples the target quantity directly.

namespace regcalc {

enum class HypothesisStatus { verified_on_grid, failed, assumed };

inline const char* hypothesis_status_name(HypothesisStatus s) {
    switch (s) {
        case HypothesisStatus::verified_on_grid: return "verified-on-grid";
        case HypothesisStatus::failed: return "failed";
        case HypothesisStatus::assumed: return "assumed";
    }
    return "?";
}

struct Hypothesis {
    std::string name;
    HypothesisStatus status = HypothesisStatus::assumed;
    std::string evidence;
};

// Monotonicity verdict of sampled values on an ordered grid.
struct GridVerdict {
    std::string property;       // "nondecreasing" or "nonincreasing"
    int checked = 0;            // consecutive pairs examined
    int violations = 0;
    double worst_violation = 0; // largest step against the direction
    double worst_x = 0;
    bool ok() const { return checked > 0 && violations == 0; }
};

struct RuleReport {
    std::vector<Hypothesis> hypotheses;
    bool applicable = false;  // all hypotheses verified, a case matched
    std::string case_name;    // "0/0", "g->+inf", "g->-inf", or "none"
    std::optional<ExtReal> conclusion;       // the limit A, or none
    std::optional<std::string> certificate;  // monotone-rule conclusion
    std::optional<LimitEstimate> rule_limit;    // limit of the derivative ratio
    std::optional<LimitEstimate> oracle_limit;  // direct limit of the target ratio
    std::optional<GridVerdict> oracle_grid;     // direct monotonicity of the target
    bool agree = false;

    bool hypothesis_failed() const {
        for (const Hypothesis& h : hypotheses)
            if (h.status == HypothesisStatus::failed) return true;
        return false;
    }
};

struct LHospitalOptions {
    LimitOptions limits;
    DAlphaOptions dalpha;
    double agree_rtol = 1e-6;
    double case_zero_tol = 1e-6;  // |limit| below this counts as a zero boundary
    double grid_tol = 1e-9;       // monotonicity comparison margin (relative)
    int junctions_per_octave = 4;

    // Oracle and boundary-case probes certify agreement at agree_rtol only, so
    // they run with acceptance loosened accordingly; strict tolerances would
    // mark slowly-converging targets (harmonic-type tails) inconclusive
    // inside the fixed schedule budget.
    LimitOptions witness_limits() const {
        LimitOptions lo = limits;
        lo.rtol = std::max(lo.rtol, 0.1 * agree_rtol);
        lo.atol = std::max(lo.atol, 1e-3 * agree_rtol);
        return lo;
    }
};

namespace detail {

template <class... Fs>
std::pair<ExtReal, ExtReal> joint_domain(const Fs&... fs) {
    ExtReal a = ExtReal::neg_inf(), b = ExtReal::pos_inf();
    auto fold = [&](const auto& f) {
        if (f.domain_a() > a) a = f.domain_a();
        if (f.domain_b() < b) b = f.domain_b();
    };
    (fold(fs), ...);
    if (!(a < b)) throw DomainError("domains do not overlap");
    return {a, b};
}

// Grid for hypothesis verification: midpoints at {1/4, 1/2, 3/4} of every
// octave of the endpoint schedule, junctions of g and alpha inside each
// octave, plus a coarse run toward the opposite end so the whole interval
// is sampled.
template <RegulatedFn G, RegulatedFn A>
std::vector<double> hypothesis_grid(const G& g, const A& alpha, ExtReal a, ExtReal b,
                                    Endpoint which, int junctions_per_octave) {
    Endpoint other = which == Endpoint::upper ? Endpoint::lower : Endpoint::upper;
    std::vector<double> anchors = interval_schedule(a, b, which);
    std::vector<double> back = interval_schedule(a, b, other);
    if (back.size() > 8) back.resize(8);
    anchors.insert(anchors.end(), back.begin(), back.end());
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    std::vector<double> xs;
    for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
        double p = anchors[i], q = anchors[i + 1];
        xs.push_back(p);
        for (double frac : {0.25, 0.5, 0.75}) {
            double m = p + (q - p) * frac;
            if (m > p && m < q) xs.push_back(m);
        }
        for (double j : g.breakpoints_in(p, q, static_cast<std::size_t>(junctions_per_octave)))
            xs.push_back(j);
        for (double j :
             alpha.breakpoints_in(p, q, static_cast<std::size_t>(junctions_per_octave)))
            xs.push_back(j);
    }
    if (!anchors.empty()) xs.push_back(anchors.back());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// alpha+(s) < alpha-(t) for consecutive grid points, plus nonnegative jumps:
// the strict-increase characterization, checked on the grid.
template <RegulatedFn A>
Hypothesis check_alpha_increasing(const A& alpha, const std::vector<double>& xs) {
    Hypothesis h{"alpha strictly increasing", HypothesisStatus::verified_on_grid, ""};
    double prev_right = 0;
    bool have_prev = false;
    for (double x : xs) {
        OneSidedPair p = alpha.one_sided(x);
        double l = p.left.finite(), r = p.right.finite();
        if (r < l) {
            h.status = HypothesisStatus::failed;
            h.evidence = "negative jump at x=" + double_str(x);
            return h;
        }
        if (have_prev && !(l > prev_right)) {
            h.status = HypothesisStatus::failed;
            h.evidence = "not increasing across x=" + double_str(x);
            return h;
        }
        prev_right = r;
        have_prev = true;
    }
    h.evidence = std::to_string(xs.size()) + " grid points";
    return h;
}

template <RegulatedFn F, RegulatedFn A>
std::optional<double> try_d(const F& f, const A& alpha, double x, const DAlphaOptions& o,
                            std::string* err) {
    try {
        return d_alpha(f, alpha, x, o).value.raw();
    } catch (const Error& e) {
        if (err && err->empty()) *err = "at x=" + double_str(x) + ": " + e.what();
        return std::nullopt;
    }
}

inline bool limits_agree(ExtReal A, const LimitEstimate& o, double rtol) {
    if (A.is_finite()) {
        if (o.status != LimitStatus::converged) return false;
        double x = A.raw(), y = o.value.raw();
        return std::abs(x - y) <= rtol * (1.0 + std::max(std::abs(x), std::abs(y)));
    }
    if (A.is_pos_inf()) return o.status == LimitStatus::diverged_pos;
    return o.status == LimitStatus::diverged_neg;
}

}  // namespace detail

// Decides lim f-/g- at the given endpoint from lim (D_a f)/(D_a g), after
// verifying on a grid that alpha strictly increases, that D_a g keeps one
// sign, and that a boundary case holds (f-,g- -> 0, or g- -> +-inf). The
// direct limit of f-/g- is always sampled as the oracle, even when a
// hypothesis fails.
template <RegulatedFn F, RegulatedFn G, RegulatedFn A>
RuleReport lhospital_limit(const F& f, const G& g, const A& alpha, Endpoint endpoint,
                           const LHospitalOptions& opt = {}) {
    auto [a, b] = detail::joint_domain(f, g, alpha);
    RuleReport rep;

    std::vector<double> grid =
        detail::hypothesis_grid(g, alpha, a, b, endpoint, opt.junctions_per_octave);
    if (grid.size() < 2) throw DomainError("interval too small to sample");

    rep.hypotheses.push_back(detail::check_alpha_increasing(alpha, grid));

    {
        Hypothesis h{"D_a g exists with constant sign", HypothesisStatus::verified_on_grid, ""};
        std::string err;
        bool any_pos = false, any_neg = false;
        for (double x : grid) {
            std::optional<double> dg = detail::try_d(g, alpha, x, opt.dalpha, &err);
            if (!dg) {
                h.status = HypothesisStatus::failed;
                h.evidence = "derivative missing " + err;
                break;
            }
            if (*dg > 0) any_pos = true;
            else if (*dg < 0) any_neg = true;
            else {
                h.status = HypothesisStatus::failed;
                h.evidence = "vanishes at x=" + double_str(x);
                break;
            }
            if (any_pos && any_neg) {
                h.status = HypothesisStatus::failed;
                h.evidence = "sign change by x=" + double_str(x);
                break;
            }
        }
        if (h.status == HypothesisStatus::verified_on_grid)
            h.evidence = std::string(any_pos ? "positive" : "negative") + " on " +
                         std::to_string(grid.size()) + " grid points";
        rep.hypotheses.push_back(h);
    }

    {
        Hypothesis h{"D_a f exists", HypothesisStatus::verified_on_grid, ""};
        std::string err;
        for (double x : grid) {
            if (!detail::try_d(f, alpha, x, opt.dalpha, &err)) {
                h.status = HypothesisStatus::failed;
                h.evidence = "derivative missing " + err;
                break;
            }
        }
        if (h.status == HypothesisStatus::verified_on_grid)
            h.evidence = std::to_string(grid.size()) + " grid points";
        rep.hypotheses.push_back(h);
    }

    // boundary case
    LimitOptions lo = opt.witness_limits();
    LimitEstimate fe = end_behavior(f, endpoint, lo);
    LimitEstimate ge = end_behavior(g, endpoint, lo);
    {
        Hypothesis h{"boundary case", HypothesisStatus::verified_on_grid, ""};
        bool f0 = fe.status == LimitStatus::converged && std::abs(fe.value.raw()) <= opt.case_zero_tol;
        bool g0 = ge.status == LimitStatus::converged && std::abs(ge.value.raw()) <= opt.case_zero_tol;
        if (f0 && g0) {
            rep.case_name = "0/0";
            h.evidence = "f- and g- vanish at the endpoint";
        } else if (ge.status == LimitStatus::diverged_pos) {
            rep.case_name = "g->+inf";
            h.evidence = "g- diverges to +inf";
        } else if (ge.status == LimitStatus::diverged_neg) {
            rep.case_name = "g->-inf";
            h.evidence = "g- diverges to -inf";
        } else {
            rep.case_name = "none";
            h.status = HypothesisStatus::failed;
            h.evidence = std::string("f-: ") + limit_status_name(fe.status) +
                         ", g-: " + limit_status_name(ge.status);
        }
        rep.hypotheses.push_back(h);
    }

    // the rule's limit: derivative ratio along the schedule
    std::vector<double> xs = interval_schedule(a, b, endpoint);
    LimitOptions ro = opt.limits;
    ro.max_samples = std::min<int>(ro.max_samples, static_cast<int>(xs.size()));
    LimitEstimate rule = estimate_limit(
        [&](int k) -> std::optional<double> {
            if (k >= static_cast<int>(xs.size())) return std::nullopt;
            double x = xs[static_cast<std::size_t>(k)];
            std::optional<double> df = detail::try_d(f, alpha, x, opt.dalpha, nullptr);
            std::optional<double> dg = detail::try_d(g, alpha, x, opt.dalpha, nullptr);
            if (!df || !dg) return std::nullopt;
            if (std::isinf(*df) && std::isinf(*dg)) return std::nullopt;
            if (std::isinf(*df)) return std::nullopt;  // engine needs finite samples
            if (*dg == 0 || std::isinf(*dg)) return std::isinf(*dg) ? std::optional<double>(0.0)
                                                                    : std::nullopt;
            double q = *df / *dg;
            return std::isfinite(q) ? std::optional<double>(q) : std::nullopt;
        },
        ro);
    rep.rule_limit = rule;
    {
        Hypothesis h{"derivative ratio has a limit", HypothesisStatus::verified_on_grid, ""};
        if (rule.status == LimitStatus::converged || rule.status == LimitStatus::diverged_pos ||
            rule.status == LimitStatus::diverged_neg) {
            h.evidence = limit_status_name(rule.status);
        } else {
            h.status = HypothesisStatus::failed;
            h.evidence = std::string(limit_status_name(rule.status)) +
                         (rule.note.empty() ? "" : "; " + rule.note);
        }
        rep.hypotheses.push_back(h);
    }

    // oracle: the target quotient sampled directly (always computed)
    LimitOptions oo = opt.witness_limits();
    oo.max_samples = ro.max_samples;
    LimitEstimate oracle = estimate_limit(
        [&](int k) -> std::optional<double> {
            if (k >= static_cast<int>(xs.size())) return std::nullopt;
            double x = xs[static_cast<std::size_t>(k)];
            double fv = f.one_sided(x).left.finite();
            double gv = g.one_sided(x).left.finite();
            if (gv == 0) return std::nullopt;
            double q = fv / gv;
            return std::isfinite(q) ? std::optional<double>(q) : std::nullopt;
        },
        oo);
    rep.oracle_limit = oracle;

    rep.applicable = !rep.hypothesis_failed() && rep.case_name != "none";
    if (rep.applicable) {
        rep.conclusion = rule.status == LimitStatus::converged ? rule.value
                         : rule.status == LimitStatus::diverged_pos ? ExtReal::pos_inf()
                                                                    : ExtReal::neg_inf();
        rep.agree = detail::limits_agree(*rep.conclusion, oracle, opt.agree_rtol);
    }
    return rep;
}

// Certifies that f-/g- is monotone on (a,b) from monotonicity of the
// derivative ratio, given the boundary zeros at zero_end. The oracle
// evaluates f-/g- on a finer grid and counts violations of the certified
// direction.
template <RegulatedFn F, RegulatedFn G, RegulatedFn A>
RuleReport monotone_certify(const F& f, const G& g, const A& alpha, Endpoint zero_end,
                            const LHospitalOptions& opt = {}) {
    auto [a, b] = detail::joint_domain(f, g, alpha);
    RuleReport rep;
    rep.case_name = "0/0";

    std::vector<double> grid =
        detail::hypothesis_grid(g, alpha, a, b, zero_end, opt.junctions_per_octave);
    if (grid.size() < 3) throw DomainError("interval too small to sample");

    rep.hypotheses.push_back(detail::check_alpha_increasing(alpha, grid));

    // boundary zeros
    {
        Hypothesis h{"f-, g- vanish at the zero end", HypothesisStatus::verified_on_grid, ""};
        LimitEstimate fe = end_behavior(f, zero_end, opt.witness_limits());
        LimitEstimate ge = end_behavior(g, zero_end, opt.witness_limits());
        bool f0 = fe.status == LimitStatus::converged && std::abs(fe.value.raw()) <= opt.case_zero_tol;
        bool g0 = ge.status == LimitStatus::converged && std::abs(ge.value.raw()) <= opt.case_zero_tol;
        if (!f0 || !g0) {
            h.status = HypothesisStatus::failed;
            h.evidence = std::string("f-: ") + limit_status_name(fe.status) +
                         ", g-: " + limit_status_name(ge.status);
        } else {
            h.evidence = "both boundary limits vanish";
        }
        rep.hypotheses.push_back(h);
    }

    // derivative ratio values over the grid
    std::vector<double> ws;
    std::vector<double> wx;
    {
        Hypothesis h{"D_a g exists with constant sign", HypothesisStatus::verified_on_grid, ""};
        std::string err;
        bool any_pos = false, any_neg = false;
        for (double x : grid) {
            std::optional<double> dg = detail::try_d(g, alpha, x, opt.dalpha, &err);
            std::optional<double> df = detail::try_d(f, alpha, x, opt.dalpha, &err);
            if (!dg || !df) {
                h.status = HypothesisStatus::failed;
                h.evidence = "derivative missing " + err;
                break;
            }
            if (*dg > 0) any_pos = true;
            else if (*dg < 0) any_neg = true;
            else {
                h.status = HypothesisStatus::failed;
                h.evidence = "vanishes at x=" + double_str(x);
                break;
            }
            if (any_pos && any_neg) {
                h.status = HypothesisStatus::failed;
                h.evidence = "sign change by x=" + double_str(x);
                break;
            }
            double w = *df / *dg;
            if (std::isnan(w)) continue;
            ws.push_back(w);
            wx.push_back(x);
        }
        if (h.status == HypothesisStatus::verified_on_grid)
            h.evidence = std::string(any_pos ? "positive" : "negative") + " on " +
                         std::to_string(grid.size()) + " grid points";
        rep.hypotheses.push_back(h);
    }

    // direction of the derivative ratio
    if (!rep.hypothesis_failed() && ws.size() >= 3) {
        double wscale = 0;
        for (double w : ws)
            if (std::isfinite(w)) wscale = std::max(wscale, std::abs(w));
        double m = opt.grid_tol * (1.0 + wscale);
        bool nondecr = true, nonincr = true, strict_inc = true, strict_dec = true;
        for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
            double d = ws[i + 1] - ws[i];
            if (d < -m) nondecr = false;
            if (d > m) nonincr = false;
            if (!(d > m)) strict_inc = false;
            if (!(d < -m)) strict_dec = false;
        }
        Hypothesis h{"derivative ratio monotone", HypothesisStatus::verified_on_grid, ""};
        if (strict_inc) rep.certificate = "strictly-increasing";
        else if (nondecr) rep.certificate = "nondecreasing";
        else if (strict_dec) rep.certificate = "strictly-decreasing";
        else if (nonincr) rep.certificate = "nonincreasing";
        if (rep.certificate) {
            h.evidence = *rep.certificate + " over " + std::to_string(ws.size()) + " samples";
        } else {
            h.status = HypothesisStatus::failed;
            h.evidence = "no direction fits the sampled ratio";
        }
        rep.hypotheses.push_back(h);
    } else if (ws.size() < 3) {
        rep.hypotheses.push_back(
            Hypothesis{"derivative ratio monotone", HypothesisStatus::failed,
                       "too few ratio samples"});
    }

    // oracle: f-/g- direction on a finer grid (diagnostic even on failure)
    {
        bool increasing = !rep.certificate || (*rep.certificate == "strictly-increasing" ||
                                               *rep.certificate == "nondecreasing");
        GridVerdict gv;
        gv.property = increasing ? "nondecreasing" : "nonincreasing";
        std::vector<double> fine;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            fine.push_back(grid[i]);
            double p = grid[i], q = grid[i + 1];
            for (double frac : {0.5})
                fine.push_back(p + (q - p) * frac);
        }
        fine.push_back(grid.back());
        std::vector<double> hv, hx;
        for (double x : fine) {
            double fv, gvv;
            try {
                fv = f.one_sided(x).left.finite();
                gvv = g.one_sided(x).left.finite();
            } catch (const Error&) {
                continue;
            }
            if (gvv == 0) continue;
            double r = fv / gvv;
            if (!std::isfinite(r)) continue;
            hv.push_back(r);
            hx.push_back(x);
        }
        double rscale = 0;
        for (double r : hv) rscale = std::max(rscale, std::abs(r));
        double m = opt.grid_tol * (1.0 + rscale);
        for (std::size_t i = 0; i + 1 < hv.size(); ++i) {
            ++gv.checked;
            double d = hv[i + 1] - hv[i];
            double against = increasing ? -d : d;
            if (against > m) {
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
