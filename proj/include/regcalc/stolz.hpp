#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "ext_real.hpp"
#include "lhospital.hpp"
#include "limit_engine.hpp"
#include "piecewise.hpp"

// Sequence quotient limits P_n/Q_n decided through the term quotient
// f_n/g_n. A sequence f is realized as the piecewise-linear interpolant F
// of its prefix sums, F(m) = f_1 + ... + f_{m+1} at integer m, so the
// interpolant's slope on (m, m+1) is the term f_{m+2} and the quotient-rule
// machinery applies verbatim with the identity integrator.

namespace regcalc {

// Piecewise-linear prefix-sum interpolant of a 1-based sequence. Models the
// regulated-function interface: continuous, kinks at positive integers.
// Copies share one prefix cache.
class SequencePolyline {
public:
    // term(n) for n >= 1. max_terms < 0 means unbounded (expression-backed);
    // otherwise only term(1..max_terms) may be requested and the domain is
    // (0, max_terms - 1).
    explicit SequencePolyline(std::function<double(long long)> term, long long max_terms = -1)
        : st_(std::make_shared<State>()) {
        if (!term) throw ConstructionError("sequence needs a term function");
        if (max_terms >= 0 && max_terms < 3)
            throw ConstructionError("sequence needs at least 3 terms");
        st_->term = std::move(term);
        st_->max_terms = max_terms;
        st_->prefix.push_back(0.0);
    }

    static SequencePolyline from_expr(const Expr& e) {
        if (e.has_x()) throw ConstructionError("sequence body must use n, not x");
        return SequencePolyline([e](long long n) { return e.eval_n(n); });
    }

    static SequencePolyline from_data(std::vector<double> terms) {
        auto data = std::make_shared<std::vector<double>>(std::move(terms));
        long long nmax = static_cast<long long>(data->size());
        return SequencePolyline(
            [data](long long n) { return (*data)[static_cast<std::size_t>(n - 1)]; }, nmax);
    }

    long long max_terms() const { return st_->max_terms; }

    double term(long long n) const {
        if (n < 1 || (st_->max_terms >= 0 && n > st_->max_terms))
            throw DomainError("sequence index " + std::to_string(n) + " out of range");
        double v = st_->term(n);
        if (!std::isfinite(v))
            throw EvalError("sequence term " + std::to_string(n) + " is not finite");
        return v;
    }

    // P_k = f_1 + ... + f_k, P_0 = 0.
    double prefix(long long k) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        ensure_locked(k);
        return st_->prefix[static_cast<std::size_t>(k)];
    }

    ExtReal domain_a() const { return ExtReal(0.0); }
    ExtReal domain_b() const {
        return st_->max_terms < 0 ? ExtReal::pos_inf()
                                  : ExtReal(static_cast<double>(st_->max_terms - 1));
    }

    double value_at(double x) const {
        long long m = cell_left_of(x);
        return prefix(m + 1) + term(m + 2) * (x - static_cast<double>(m));
    }

    OneSidedPair one_sided(double x) const {
        double v = value_at(x);
        return OneSidedPair{ExtReal(v), ExtReal(v)};
    }

    std::vector<double> breakpoints_in(double s, double t, std::size_t cap = (1u << 20)) const {
        std::vector<double> out;
        if (!(s < t)) return out;
        double bhi = st_->max_terms < 0 ? std::numeric_limits<double>::infinity()
                                        : static_cast<double>(st_->max_terms - 1);
        long long j0 = static_cast<long long>(std::floor(s)) + 1;
        if (j0 < 1) j0 = 1;
        double top = std::min(t, bhi);
        long long j1 = static_cast<long long>(std::ceil(top)) - 1;
        if (static_cast<double>(j1) >= top) --j1;
        if (j1 < j0) return out;
        detail::capped_indices(static_cast<std::size_t>(j1 - j0 + 1), cap, out,
                               [&](std::size_t i) {
                                   return static_cast<double>(j0 + static_cast<long long>(i));
                               });
        return out;
    }

    std::optional<double> derivative_left(double x) const {
        long long m = cell_left_of(x);
        return try_term(m + 2);
    }

    std::optional<double> derivative_right(double x) const {
        long long m = static_cast<long long>(std::floor(x));
        if (m < 0) return std::nullopt;
        return try_term(m + 2);
    }

private:
    struct State {
        std::function<double(long long)> term;
        long long max_terms = -1;
        std::vector<double> prefix;  // prefix[k] = P_k
        mutable std::mutex mu;
    };
    std::shared_ptr<State> st_;

    // Index m of the cell (m, m+1] whose closure reaches x from the left.
    long long cell_left_of(double x) const {
        ExtReal b = domain_b();
        if (!(x > 0.0) || !(ExtReal(x) <= b)) throw DomainError("x outside sequence domain");
        double fl = std::floor(x);
        long long m = static_cast<long long>(fl);
        if (fl == x) m -= 1;
        return m < 0 ? 0 : m;
    }

    std::optional<double> try_term(long long n) const {
        try {
            return term(n);
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    void ensure_locked(long long k) const {
        if (k < 0) throw DomainError("negative prefix index");
        if (st_->max_terms >= 0 && k > st_->max_terms)
            throw DomainError("prefix index beyond sequence data");
        auto& p = st_->prefix;
        while (static_cast<long long>(p.size()) <= k) {
            long long n = static_cast<long long>(p.size());
            double v = st_->term(n);
            if (!std::isfinite(v))
                throw EvalError("sequence term " + std::to_string(n) + " is not finite");
            p.push_back(p.back() + v);
        }
    }
};

static_assert(RegulatedFn<SequencePolyline>);

struct StolzOptions {
    long long probe_n = 1000000;  // direct prefix-ratio probe index
    int oracle_k_max = 20;        // prefix ratio sampled at n = 2^k, k <= this
    double agree_rtol = 1e-6;
    double construct_tol = 1e-9;
    LHospitalOptions rule;
    // Prefix-ratio acceptance: harmonic-type tails carry (a + b k) 2^-k
    // error terms, resolvable to ~1e-8 but not to 1e-9 in this budget.
    LimitOptions oracle_limits{1e-7, 1e-9, 21, 5, 8};
};

struct StolzReport {
    RuleReport rule;           // quotient rule over the interpolants
    LimitEstimate seq_ratio;   // f_n/g_n along n = 2^k
    LimitEstimate oracle;      // P_n/Q_n along n = 2^k, extrapolated
    long long raw_n = 0;       // direct probe: P_raw_n / Q_raw_n
    double raw_numer = 0, raw_denom = 0, raw_ratio = 0;
    bool construction_ok = false;
    bool positivity_ok = false;
    std::string construction_note;
    bool agree = false;
};

namespace detail {

// Geometric-schedule fallback: with samples on n = 2^k, two Richardson
// steps with ratio 2 cancel (a + b k) 2^-k error terms exactly. Used when
// plain extrapolation cannot classify the prefix ratio.
inline std::optional<LimitEstimate> richardson2(const std::vector<std::optional<double>>& vs,
                                                const LimitOptions& lo) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (!vs[i] || !std::isfinite(*vs[i])) start = i + 1;
    std::vector<double> v;
    for (std::size_t i = start; i < vs.size(); ++i) v.push_back(*vs[i]);
    if (v.size() < 5) return std::nullopt;
    std::vector<double> r1, r2;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) r1.push_back(2 * v[i + 1] - v[i]);
    for (std::size_t i = 0; i + 1 < r1.size(); ++i) r2.push_back(2 * r1[i + 1] - r1[i]);
    if (r2.size() < 3) return std::nullopt;
    double e0 = r2[r2.size() - 3], e1 = r2[r2.size() - 2], e2 = r2[r2.size() - 1];
    double scale = std::max({std::abs(e0), std::abs(e1), std::abs(e2)});
    double tol = lo.atol + lo.rtol * scale;
    double spread = std::max({std::abs(e0 - e1), std::abs(e1 - e2), std::abs(e0 - e2)});
    if (!(spread <= tol)) return std::nullopt;
    LimitEstimate out;
    out.status = LimitStatus::converged;
    out.value = ExtReal(e2);
    out.err_estimate = spread;
    out.samples_used = static_cast<int>(v.size());
    out.note = "geometric-schedule extrapolation";
    return out;
}

}  // namespace detail

// Limit of the prefix ratio P_n/Q_n sampled along n = 2^k, with the
// Richardson fallback for slowly-converging tails.
inline LimitEstimate stolz_prefix_ratio(const SequencePolyline& f, const SequencePolyline& g,
                                        int k_max, const LimitOptions& lo) {
    long long nmax = f.max_terms();
    if (g.max_terms() >= 0 && (nmax < 0 || g.max_terms() < nmax)) nmax = g.max_terms();
    std::vector<std::optional<double>> vs;
    for (int k = 0; k <= k_max; ++k) {
        long long n = 1LL << k;
        if (nmax >= 0 && n > nmax) break;
        std::optional<double> v;
        try {
            double num = f.prefix(n), den = g.prefix(n);
            if (den != 0) {
                double q = num / den;
                if (std::isfinite(q)) v = q;
            }
        } catch (const Error&) {
        }
        vs.push_back(v);
    }
    LimitOptions ro = lo;
    ro.max_samples = static_cast<int>(vs.size());
    LimitEstimate est = estimate_limit(
        [&](int k) -> std::optional<double> {
            return k < static_cast<int>(vs.size()) ? vs[static_cast<std::size_t>(k)]
                                                   : std::nullopt;
        },
        ro);
    if (est.status == LimitStatus::inconclusive) {
        if (auto r = detail::richardson2(vs, lo)) return *r;
    }
    return est;
}

// Full run: quotient rule on the interpolants (with hypothesis verdicts),
// the term-ratio limit, the extrapolated prefix-ratio oracle, one direct
// probe, and interpolant construction checks.
inline StolzReport stolz_report(const SequencePolyline& f, const SequencePolyline& g,
                                const StolzOptions& opt = {}) {
    StolzReport rep;

    double bf = f.domain_b().is_finite() ? f.domain_b().raw()
                                         : std::numeric_limits<double>::infinity();
    double bg = g.domain_b().is_finite() ? g.domain_b().raw()
                                         : std::numeric_limits<double>::infinity();
    double bj = std::min(bf, bg);
    PiecewiseFn id = PiecewiseFn::identity(0.0, bj);

    rep.rule = lhospital_limit(f, g, id, Endpoint::upper, opt.rule);

    // term ratio f_n/g_n along n = 2^k
    {
        long long nmax = f.max_terms();
        if (g.max_terms() >= 0 && (nmax < 0 || g.max_terms() < nmax)) nmax = g.max_terms();
        LimitOptions ro = opt.rule.limits;
        ro.max_samples = opt.oracle_k_max + 1;
        rep.seq_ratio = estimate_limit(
            [&](int k) -> std::optional<double> {
                if (k > opt.oracle_k_max) return std::nullopt;
                long long n = 1LL << k;
                if (nmax >= 0 && n > nmax) return std::nullopt;
                double den = g.term(n);
                if (den == 0) return std::nullopt;
                double q = f.term(n) / den;
                return std::isfinite(q) ? std::optional<double>(q) : std::nullopt;
            },
            ro);
    }

    rep.oracle = stolz_prefix_ratio(f, g, opt.oracle_k_max, opt.oracle_limits);

    // direct probe
    {
        long long n = opt.probe_n;
        if (f.max_terms() >= 0) n = std::min(n, f.max_terms());
        if (g.max_terms() >= 0) n = std::min(n, g.max_terms());
        rep.raw_n = n;
        rep.raw_numer = f.prefix(n);
        rep.raw_denom = g.prefix(n);
        rep.raw_ratio = rep.raw_denom != 0 ? rep.raw_numer / rep.raw_denom
                                           : std::numeric_limits<double>::quiet_NaN();
    }

    // interpolant construction: slope inside cells, averaged slope at kinks
    {
        rep.construction_ok = true;
        double bhi = std::isfinite(bj) ? bj : std::numeric_limits<double>::infinity();
        auto check_one = [&](const SequencePolyline& s, const char* tag) {
            for (long long m : {0LL, 1LL, 2LL, 5LL, 10LL, 100LL}) {
                if (static_cast<double>(m + 1) >= bhi) break;
                double want_in = s.term(m + 2);
                for (double q : {0.25, 0.5, 0.75}) {
                    double x = static_cast<double>(m) + q;
                    double got = d_alpha(s, id, x, opt.rule.dalpha).value.finite();
                    if (std::abs(got - want_in) > opt.construct_tol * (1 + std::abs(want_in))) {
                        rep.construction_ok = false;
                        rep.construction_note = std::string(tag) + " slope off at x=" +
                                                double_str(x);
                        return;
                    }
                }
                if (static_cast<double>(m + 1) + 1 < bhi) {
                    double want_kink = 0.5 * (s.term(m + 2) + s.term(m + 3));
                    double got = d_alpha(s, id, static_cast<double>(m + 1), opt.rule.dalpha)
                                     .value.finite();
                    if (std::abs(got - want_kink) >
                        opt.construct_tol * (1 + std::abs(want_kink))) {
                        rep.construction_ok = false;
                        rep.construction_note = std::string(tag) + " kink slope off at x=" +
                                                std::to_string(m + 1);
                        return;
                    }
                }
            }
        };
        try {
            check_one(f, "numerator");
            if (rep.construction_ok) check_one(g, "denominator");
        } catch (const Error& e) {
            rep.construction_ok = false;
            rep.construction_note = e.what();
        }
    }

    // denominator terms must keep one sign (strict monotonicity of Q)
    {
        rep.positivity_ok = true;
        long long nmax = g.max_terms();
        std::vector<long long> ns;
        for (long long n = 1; n <= 64; ++n) ns.push_back(n);
        for (int j = 7; j <= opt.oracle_k_max; ++j) ns.push_back(1LL << j);
        bool any_pos = false, any_neg = false;
        try {
            for (long long n : ns) {
                if (nmax >= 0 && n > nmax) break;
                double v = g.term(n);
                if (v > 0) any_pos = true;
                else if (v < 0) any_neg = true;
                else {
                    rep.positivity_ok = false;
                    break;
                }
                if (any_pos && any_neg) {
                    rep.positivity_ok = false;
                    break;
                }
            }
        } catch (const Error&) {
            rep.positivity_ok = false;
        }
    }

    bool limits_match = false;
    if (rep.rule.applicable && rep.rule.conclusion)
        limits_match = detail::limits_agree(*rep.rule.conclusion, rep.oracle, opt.agree_rtol);
    rep.agree = limits_match && rep.construction_ok && rep.positivity_ok;
    return rep;
}

}  // namespace regcalc
