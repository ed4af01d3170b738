#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "regcalc/errors.hpp"
#include "regcalc/expr.hpp"
#include "regcalc/ext_real.hpp"
#include "regcalc/limit_engine.hpp"

namespace regcalc {

// Pair of one-sided limits (f-(x), f+(x)) at an interior point. Both are
// finite for a regulated function; infinities never escape from one_sided
// (they raise NotRegulatedError instead).
struct OneSidedPair {
    ExtReal left = ExtReal(0.0);
    ExtReal right = ExtReal(0.0);
};

struct Breakpoint {
    double x = 0;
    double jump = 0;  // f+(x) - f-(x)
};

enum class Endpoint { lower, upper };

// Anything that behaves like a regulated function on an open interval:
// pointwise values, one-sided limits, discontinuity locations, and optional
// one-sided classical derivatives.
template <class F>
concept RegulatedFn = requires(const F& f, double x, double s, double t, std::size_t cap) {
    { f.domain_a() } -> std::convertible_to<ExtReal>;
    { f.domain_b() } -> std::convertible_to<ExtReal>;
    { f.value_at(x) } -> std::convertible_to<double>;
    { f.one_sided(x) } -> std::convertible_to<OneSidedPair>;
    { f.breakpoints_in(s, t, cap) } -> std::convertible_to<std::vector<double>>;
    { f.derivative_left(x) } -> std::convertible_to<std::optional<double>>;
    { f.derivative_right(x) } -> std::convertible_to<std::optional<double>>;
};

namespace detail {

inline double join_tol(double scale) { return 1e-9 * (1.0 + std::abs(scale)); }

// Appends up to cap values of gen(i) for i in [0, count), always keeping the
// first and last 8 exactly and striding through the middle. Callers rely on
// the ends being exact (nearest-breakpoint queries).
template <class Gen>
void capped_indices(std::size_t count, std::size_t cap, std::vector<double>& out, Gen gen) {
    if (count <= cap) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(gen(i));
        return;
    }
    std::size_t head = std::min<std::size_t>(8, cap / 2);
    std::size_t tail = std::min<std::size_t>(8, cap - head);
    std::size_t mid_cap = cap - head - tail;
    for (std::size_t i = 0; i < head; ++i) out.push_back(gen(i));
    if (mid_cap > 0) {
        double stride = static_cast<double>(count - head - tail) / static_cast<double>(mid_cap + 1);
        for (std::size_t j = 1; j <= mid_cap; ++j)
            out.push_back(gen(head + static_cast<std::size_t>(stride * static_cast<double>(j))));
    }
    for (std::size_t i = count - tail; i < count; ++i) out.push_back(gen(i));
}

}  // namespace detail

// One explicit cell (left, right] with a closed-form body in x. right may be
// +inf for a trailing cell, left -inf for a leading one.
struct Piece {
    double left = 0;
    double right = 0;
    Expr body;
};

// A family of cells (lo(n), hi(n)] for n = n_start, n_start+1, ...; lo, hi are
// expressions in n, the body an expression in x and n. Several families may
// interleave; together with the explicit pieces they must tile the domain.
struct Family {
    long long n_start = 0;
    Expr lo, hi;
    Expr body;
};

struct ValidateOptions {
    long long horizon = 10000;   // indices per family checked for tiling
    bool check_regularity = true;
    LimitOptions existence;      // tolerance used for one-sided existence checks
    ValidateOptions() {
        existence.rtol = 1e-6;
        existence.atol = 1e-9;
    }
};

// A cell resolved at a concrete point.
struct Cell {
    double left = 0;
    double right = 0;
    Expr body;
    std::optional<long long> n;   // family index when family-backed
    std::optional<Expr> dbody;    // d body / dx, if symbolically available

    double eval(double x) const { return n ? body.eval_xn(x, *n) : body.eval_x(x); }
    std::optional<double> eval_deriv(double x) const {
        if (!dbody) return std::nullopt;
        try {
            double v = n ? dbody->eval_xn(x, *n) : dbody->eval_x(x);
            if (!std::isfinite(v)) return std::nullopt;
            return v;
        } catch (const Error&) {
            return std::nullopt;
        }
    }
};

// Piecewise closed-form regulated function on an open interval (a, b).
// Construction validates the cell structure: explicit pieces must chain
// exactly (shared bounds are snapped to identical doubles so junction
// classification is bit-exact), families must tile the remainder out to a
// horizon, bounds must be strictly increasing, and one-sided limits must
// exist finite at a spot-checked set of junctions.
class PiecewiseFn {
public:
    PiecewiseFn(ExtReal a, ExtReal b, std::vector<Piece> pieces, std::vector<Family> families,
                const ValidateOptions& vo = {})
        : a_(a), b_(b), pieces_(std::move(pieces)), families_(std::move(families)) {
        validate(vo);
    }

    static PiecewiseFn from_expr(ExtReal a, ExtReal b, Expr body) {
        std::vector<Piece> ps;
        ps.push_back(Piece{a.raw(), b.raw(), std::move(body)});
        return PiecewiseFn(a, b, std::move(ps), {});
    }

    static PiecewiseFn identity(ExtReal a, ExtReal b) { return from_expr(a, b, Expr::x()); }

    ExtReal domain_a() const { return a_; }
    ExtReal domain_b() const { return b_; }
    const std::string& name() const { return name_; }
    void set_name(std::string s) { name_ = std::move(s); }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::vector<Family>& families() const { return families_; }

    // Cell owning x: the unique (left, right] with left < x <= right.
    Cell locate(double x) const {
        if (!(ExtReal(x) > a_) || !(ExtReal(x) <= b_))
            throw DomainError("point " + double_str(x) + " outside domain (" + a_.str() + ", " +
                              b_.str() + ")");
        // explicit pieces: first right >= x
        std::size_t lo = 0, hi = pieces_.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (pieces_[mid].right < x) lo = mid + 1;
            else hi = mid;
        }
        if (lo < pieces_.size() && pieces_[lo].left < x)
            return make_cell_piece(lo);
        for (std::size_t fi = 0; fi < families_.size(); ++fi) {
            auto n = family_index_for(families_[fi], x);
            if (n) return make_cell_family(fi, *n);
        }
        throw HorizonError("point " + double_str(x) + " not covered by any cell");
    }

    // f(x) for a < x < b (cells are right-closed, so the junction value comes
    // from the cell ending there).
    double value_at(double x) const {
        if (!(ExtReal(x) < b_))
            throw DomainError("point " + double_str(x) + " outside open domain");
        Cell c = locate(x);
        double v = c.eval(x);
        if (!std::isfinite(v)) throw EvalError("non-finite value", c.body.str());
        return v;
    }

    // (f-(x), f+(x)) at an interior point. At a junction the two cells meeting
    // at x are consulted; elsewhere both sides equal the (continuous) body
    // value when it is evaluable, with a numeric-limit fallback for bodies
    // singular at x.
    OneSidedPair one_sided(double x) const {
        if (!(ExtReal(x) > a_) || !(ExtReal(x) < b_))
            throw DomainError("one-sided limits need an interior point");
        Cell c = locate(x);
        if (x < c.right) {
            try {
                double v = c.eval(x);
                if (std::isfinite(v)) return OneSidedPair{ExtReal(v), ExtReal(v)};
            } catch (const Error&) {
            }
            ExtReal l = cell_limit(c, x, /*from_left=*/true);
            ExtReal r = cell_limit(c, x, /*from_left=*/false);
            return OneSidedPair{l, r};
        }
        // junction: x == c.right exactly
        ExtReal l = cell_limit(c, x, /*from_left=*/true);
        auto nc = next_cell_at(x);
        if (!nc) throw HorizonError("no cell to the right of " + double_str(x));
        ExtReal r = cell_limit(*nc, x, /*from_left=*/false);
        return OneSidedPair{l, r};
    }

    // Junction locations inside the open interval (s, t), ascending. cap
    // subsamples unbounded families but always keeps the first and last 8
    // junctions of every family range exactly.
    std::vector<double> breakpoints_in(double s, double t, std::size_t cap = (1u << 20)) const {
        std::vector<double> out;
        if (!(s < t)) return out;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            double r = pieces_[i].right;
            if (std::isfinite(r) && r > s && r < t && ExtReal(r) < b_) out.push_back(r);
        }
        for (const Family& fam : families_) {
            auto first = family_first_junction_above(fam, s);
            if (!first) continue;
            // count junctions hi(n) < t
            long long n0 = *first;
            if (hi_at(fam, n0) >= t) continue;
            long long n1 = family_last_junction_below(fam, n0, t);
            std::size_t count = static_cast<std::size_t>(n1 - n0 + 1);
            detail::capped_indices(count, cap, out, [&](std::size_t i) {
                return hi_at(fam, n0 + static_cast<long long>(i));
            });
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        // keep only interior junctions
        std::vector<double> res;
        res.reserve(out.size());
        for (double q : out)
            if (ExtReal(q) > a_ && ExtReal(q) < b_) res.push_back(q);
        return res;
    }

    std::optional<double> derivative_left(double x) const {
        Cell c = locate(x);
        return c.eval_deriv(x);
    }

    std::optional<double> derivative_right(double x) const {
        Cell c = locate(x);
        if (x < c.right) return c.eval_deriv(x);
        auto nc = next_cell_at(x);
        if (!nc) return std::nullopt;
        return nc->eval_deriv(x);
    }

    // The cell starting exactly at q, if any (q must be a junction or domain
    // point; tolerance covers formula-generated bounds).
    std::optional<Cell> next_cell_at(double q) const {
        double tol = detail::join_tol(q);
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            if (std::abs(pieces_[i].left - q) <= tol) return make_cell_piece(i);
        for (std::size_t fi = 0; fi < families_.size(); ++fi) {
            const Family& fam = families_[fi];
            auto n = family_index_with_lo(fam, q, tol);
            if (n) return make_cell_family(fi, *n);
        }
        return std::nullopt;
    }

    // Cells intersecting (s, t), in order. Throws when more than cap cells
    // would be returned.
    std::vector<Cell> cells_in(double s, double t, std::size_t cap = (1u << 20)) const {
        std::vector<Cell> out;
        if (!(s < t)) return out;
        double probe = std::nextafter(s, std::numeric_limits<double>::infinity());
        Cell c = locate(probe);
        for (;;) {
            out.push_back(c);
            if (out.size() > cap) throw Error("too many cells in range");
            if (!(c.right < t)) break;
            auto nc = next_cell_at(c.right);
            if (!nc) break;
            c = *nc;
        }
        return out;
    }

private:
    Cell make_cell_piece(std::size_t i) const {
        Cell c;
        c.left = pieces_[i].left;
        c.right = pieces_[i].right;
        c.body = pieces_[i].body;
        c.dbody = piece_dx_[i];
        return c;
    }

    Cell make_cell_family(std::size_t fi, long long n) const {
        const Family& fam = families_[fi];
        Cell c;
        c.left = lo_at(fam, n);
        c.right = hi_at(fam, n);
        c.body = fam.body;
        c.n = n;
        c.dbody = family_dx_[fi];
        return c;
    }

    static double lo_at(const Family& fam, long long n) { return fam.lo.eval_n(n); }
    static double hi_at(const Family& fam, long long n) { return fam.hi.eval_n(n); }

    // Largest n >= n_start with lo(n) < x, provided x <= hi(n). lo is strictly
    // increasing in n (validated), so exponential + binary search applies.
    std::optional<long long> family_index_for(const Family& fam, double x) const {
        if (lo_at(fam, fam.n_start) >= x) return std::nullopt;
        long long step = 1;
        long long last_inside = fam.n_start;
        while (lo_at(fam, fam.n_start + step) < x) {
            last_inside = fam.n_start + step;
            if (step > (1LL << 50)) throw HorizonError("family index search overflow");
            step *= 2;
        }
        long long lo = last_inside, hi = fam.n_start + step;  // lo(hi_idx) >= x
        while (hi - lo > 1) {
            long long mid = lo + (hi - lo) / 2;
            if (lo_at(fam, mid) < x) lo = mid;
            else hi = mid;
        }
        if (x <= hi_at(fam, lo)) return lo;
        return std::nullopt;
    }

    std::optional<long long> family_index_with_lo(const Family& fam, double q, double tol) const {
        if (std::abs(lo_at(fam, fam.n_start) - q) <= tol) return fam.n_start;
        auto n = family_index_for(fam, q + 2 * tol + 1e-300);
        if (n && std::abs(lo_at(fam, *n) - q) <= tol) return n;
        return std::nullopt;
    }

    // Smallest n with hi(n) > s.
    std::optional<long long> family_first_junction_above(const Family& fam, double s) const {
        if (hi_at(fam, fam.n_start) > s) return fam.n_start;
        long long step = 1;
        while (hi_at(fam, fam.n_start + step) <= s) {
            if (step > (1LL << 50)) return std::nullopt;
            step *= 2;
        }
        long long lo = fam.n_start + step / 2, hi = fam.n_start + step;
        while (hi - lo > 1) {
            long long mid = lo + (hi - lo) / 2;
            if (hi_at(fam, mid) <= s) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    // Largest n >= n0 with hi(n) < t (requires hi(n0) < t).
    long long family_last_junction_below(const Family& fam, long long n0, double t) const {
        long long step = 1;
        long long last = n0;
        while (hi_at(fam, n0 + step) < t) {
            last = n0 + step;
            if (step > (1LL << 50)) throw HorizonError("family junction search overflow");
            step *= 2;
        }
        long long lo = last, hi = n0 + step;
        while (hi - lo > 1) {
            long long mid = lo + (hi - lo) / 2;
            if (hi_at(fam, mid) < t) lo = mid;
            else hi = mid;
        }
        return lo;
    }

    // One-sided limit of a cell's body at x. Direct evaluation is exact when
    // the body is defined at x (closed-form bodies are continuous on their
    // domains); otherwise the numeric limit engine runs inside the cell.
    ExtReal cell_limit(const Cell& c, double x, bool from_left) const {
        try {
            double v = c.eval(x);
            if (std::isfinite(v)) return ExtReal(v);
        } catch (const Error&) {
        }
        double width;
        if (from_left)
            width = std::isinf(c.left) ? 1.0 : x - c.left;
        else
            width = std::isinf(c.right) ? 1.0 : c.right - x;
        if (width <= 0) width = 1.0;
        double h0 = std::min(1.0, width) / 4.0;
        auto hs = shrink_steps(h0, x, 53);
        auto est = estimate_limit(
            [&](int k) -> std::optional<double> {
                if (k >= static_cast<int>(hs.size())) return std::nullopt;
                double t = from_left ? x - hs[static_cast<std::size_t>(k)]
                                     : x + hs[static_cast<std::size_t>(k)];
                return c.eval(t);
            });
        if (est.status == LimitStatus::converged) return est.value;
        throw NotRegulatedError(std::string("one-sided limit from the ") +
                                (from_left ? "left" : "right") + " at " + double_str(x) +
                                " did not converge (" + limit_status_name(est.status) + ")");
    }

    void validate(const ValidateOptions& vo) {
        if (!(a_ < b_)) throw ConstructionError("domain requires a < b");
        if (pieces_.empty() && families_.empty())
            throw ConstructionError("no cells");
        std::sort(pieces_.begin(), pieces_.end(),
                  [](const Piece& p, const Piece& q) { return p.left < q.left; });
        for (const Piece& p : pieces_)
            if (!(p.left < p.right)) throw ConstructionError("cell with nonpositive width");
        // chain explicit pieces, snapping shared bounds
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
            double gap = pieces_[i + 1].left - pieces_[i].right;
            if (std::abs(gap) > detail::join_tol(pieces_[i].right))
                throw ConstructionError(gap > 0 ? "gap between cells at " +
                                                       double_str(pieces_[i].right)
                                                 : "overlapping cells at " +
                                                       double_str(pieces_[i + 1].left));
            pieces_[i + 1].left = pieces_[i].right;
        }
        if (!pieces_.empty()) {
            if (a_.is_finite()) {
                if (std::abs(pieces_.front().left - a_.raw()) > detail::join_tol(a_.raw()))
                    throw ConstructionError("first cell does not start at the domain's lower end");
                pieces_.front().left = a_.raw();
            } else if (!std::isinf(pieces_.front().left)) {
                throw ConstructionError("first cell must extend to -inf");
            }
        }
        double chain_end = pieces_.empty() ? a_.raw() : pieces_.back().right;
        if (families_.empty()) {
            bool end_ok = b_.is_finite()
                              ? std::abs(chain_end - b_.raw()) <= detail::join_tol(b_.raw())
                              : std::isinf(chain_end) && chain_end > 0;
            if (!end_ok) throw ConstructionError("cells do not reach the domain's upper end");
            if (b_.is_finite()) pieces_.back().right = b_.raw();
        } else {
            if (std::isinf(chain_end))
                throw ConstructionError("families cannot follow an unbounded cell");
            validate_families(chain_end, vo);
        }
        // cache symbolic derivatives
        piece_dx_.clear();
        for (const Piece& p : pieces_) piece_dx_.push_back(try_diff(p.body));
        family_dx_.clear();
        for (const Family& f : families_) family_dx_.push_back(try_diff(f.body));
        if (vo.check_regularity) spot_check_regularity(vo);
    }

    static std::optional<Expr> try_diff(const Expr& e) {
        try {
            return e.diff();
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    void validate_families(double chain_end, const ValidateOptions& vo) {
        struct Span {
            double lo, hi;
            std::size_t fam;
            long long n;
        };
        std::vector<Span> spans;
        for (std::size_t fi = 0; fi < families_.size(); ++fi) {
            const Family& fam = families_[fi];
            if (fam.lo.has_x() || fam.hi.has_x())
                throw ConstructionError("family bounds must be expressions in n only");
            for (long long k = 0; k <= vo.horizon; ++k) {
                long long n = fam.n_start + k;
                double l, h;
                try {
                    l = lo_at(fam, n);
                    h = hi_at(fam, n);
                } catch (const Error& e) {
                    throw ConstructionError("family bound failed to evaluate at n=" +
                                            std::to_string(n) + ": " + e.what());
                }
                if (!std::isfinite(l) || !std::isfinite(h))
                    throw ConstructionError("non-finite family bound at n=" + std::to_string(n));
                if (!(l < h))
                    throw ConstructionError("family cell with nonpositive width at n=" +
                                            std::to_string(n));
                spans.push_back(Span{l, h, fi, n});
            }
        }
        std::sort(spans.begin(), spans.end(),
                  [](const Span& u, const Span& v) { return u.lo < v.lo; });
        if (std::abs(spans.front().lo - chain_end) > detail::join_tol(chain_end))
            throw ConstructionError("families do not start where the explicit cells end");
        // adjacency across the merged stream; the final span per horizon ends
        // the verified region, beyond it the formulas are trusted
        std::size_t checked = spans.size() - families_.size();  // all but the last of each stream
        double cursor_hi = spans.front().hi;
        for (std::size_t i = 1; i <= checked && i < spans.size(); ++i) {
            if (std::abs(spans[i].lo - cursor_hi) > detail::join_tol(cursor_hi))
                throw ConstructionError(
                    "family cells do not tile: expected a cell starting at " +
                    double_str(cursor_hi) + ", found " + double_str(spans[i].lo) + " (n=" +
                    std::to_string(spans[i].n) + ")");
            cursor_hi = spans[i].hi;
        }
        if (b_.is_finite() && cursor_hi > b_.raw() + detail::join_tol(b_.raw()))
            throw ConstructionError("family cells overrun the domain's upper end");
    }

    void spot_check_regularity(const ValidateOptions& vo) {
        std::vector<double> qs;
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) qs.push_back(pieces_[i].right);
        if (!pieces_.empty() && !families_.empty()) qs.push_back(pieces_.back().right);
        for (const Family& fam : families_) {
            static constexpr long long offs[] = {0, 1, 2, 3, 4, 10, 100, 1000};
            for (long long o : offs) {
                if (o > vo.horizon) break;
                qs.push_back(hi_at(fam, fam.n_start + o));
            }
            qs.push_back(hi_at(fam, fam.n_start + vo.horizon));
        }
        for (double q : qs) {
            if (!(ExtReal(q) > a_) || !(ExtReal(q) < b_)) continue;
            try {
                one_sided(q);  // throws NotRegulatedError on non-finite limits
            } catch (const NotRegulatedError&) {
                throw;
            } catch (const DomainError&) {
            }
        }
        // midpoint of the first cell: the body must produce values
        if (!pieces_.empty()) {
            const Piece& p = pieces_.front();
            double m = std::isinf(p.left) ? p.right - 1 : 0.5 * (p.left + p.right);
            try {
                one_sided(m);
            } catch (const DomainError&) {
            }
        }
    }

    ExtReal a_, b_;
    std::vector<Piece> pieces_;
    std::vector<Family> families_;
    std::vector<std::optional<Expr>> piece_dx_;
    std::vector<std::optional<Expr>> family_dx_;
    std::string name_ = "f";
};

// ---- generic one-sided limits and views -------------------------------------

// Distance from x to the nearest breakpoint strictly on one side, within a
// unit window; falls back to 1 when there is none.
template <RegulatedFn F>
double gap_to_breakpoint(const F& f, double x, bool below) {
    std::vector<double> bs =
        below ? f.breakpoints_in(x - 1.0, x, 64) : f.breakpoints_in(x, x + 1.0, 64);
    if (below) {
        for (std::size_t i = bs.size(); i-- > 0;)
            if (bs[i] < x) return x - bs[i];
    } else {
        for (double q : bs)
            if (q > x) return q - x;
    }
    return 1.0;
}

// One-sided limits computed purely from pointwise samples of value_at. Used
// by the derived views, whose pointwise values are themselves limits of the
// base function.
template <class F>
OneSidedPair generic_one_sided(const F& f, double x, const LimitOptions& opt = {}) {
    auto side = [&](bool from_left) -> ExtReal {
        double gap = gap_to_breakpoint(f, x, from_left);
        double h0 = std::min(1.0, gap) / 4.0;
        auto hs = shrink_steps(h0, x, opt.max_samples);
        auto est = estimate_limit(
            [&](int k) -> std::optional<double> {
                if (k >= static_cast<int>(hs.size())) return std::nullopt;
                double t = from_left ? x - hs[static_cast<std::size_t>(k)]
                                     : x + hs[static_cast<std::size_t>(k)];
                return f.value_at(t);
            },
            opt);
        if (est.status == LimitStatus::converged) return est.value;
        throw NotRegulatedError(std::string("one-sided limit from the ") +
                                (from_left ? "left" : "right") + " at " + double_str(x) +
                                " did not converge (" + limit_status_name(est.status) + ")");
    };
    return OneSidedPair{side(true), side(false)};
}

// The regulated function x -> f-(x) (or f+). Pointwise values are the base
// function's one-sided limits; its own one-sided limits are recomputed
// generically from those values, which is what makes identities like
// (f-)- = f- testable rather than true by construction.
template <RegulatedFn F>
class OneSideView {
public:
    OneSideView(const F& f, bool left_side) : f_(&f), left_(left_side) {}

    ExtReal domain_a() const { return f_->domain_a(); }
    ExtReal domain_b() const { return f_->domain_b(); }

    double value_at(double x) const {
        OneSidedPair p = f_->one_sided(x);
        return (left_ ? p.left : p.right).finite();
    }
    OneSidedPair one_sided(double x) const { return generic_one_sided(*this, x); }
    std::vector<double> breakpoints_in(double s, double t, std::size_t cap = (1u << 20)) const {
        return f_->breakpoints_in(s, t, cap);
    }
    std::optional<double> derivative_left(double x) const { return f_->derivative_left(x); }
    std::optional<double> derivative_right(double x) const { return f_->derivative_right(x); }

private:
    const F* f_;
    bool left_;
};

// f shifted by a constant: x -> f(x) - c.
template <RegulatedFn F>
class OffsetView {
public:
    OffsetView(const F& f, double c) : f_(&f), c_(c) {}

    ExtReal domain_a() const { return f_->domain_a(); }
    ExtReal domain_b() const { return f_->domain_b(); }
    double value_at(double x) const { return f_->value_at(x) - c_; }
    OneSidedPair one_sided(double x) const {
        OneSidedPair p = f_->one_sided(x);
        return OneSidedPair{p.left - ExtReal(c_), p.right - ExtReal(c_)};
    }
    std::vector<double> breakpoints_in(double s, double t, std::size_t cap = (1u << 20)) const {
        return f_->breakpoints_in(s, t, cap);
    }
    std::optional<double> derivative_left(double x) const { return f_->derivative_left(x); }
    std::optional<double> derivative_right(double x) const { return f_->derivative_right(x); }

private:
    const F* f_;
    double c_;
};

// ---- breakpoints with jumps ---------------------------------------------------

template <RegulatedFn F>
std::vector<Breakpoint> breakpoints(const F& f, double s, double t,
                                    std::size_t cap = (1u << 20)) {
    std::vector<Breakpoint> out;
    for (double q : f.breakpoints_in(s, t, cap)) {
        OneSidedPair p = f.one_sided(q);
        out.push_back(Breakpoint{q, p.right.finite() - p.left.finite()});
    }
    return out;
}

// ---- end behavior --------------------------------------------------------------

// Evaluation points marching toward an endpoint of the interval (a,b),
// following the standard schedules: x_k = x0 * 2^k (x0 = 4) toward an
// infinite end, b -+ h0 * 2^-k toward a finite one.
inline std::vector<double> interval_schedule(ExtReal a, ExtReal b, Endpoint which,
                                             int inf_steps = 21) {
    std::vector<double> xs;
    if (which == Endpoint::upper) {
        if (b.is_finite()) {
            double width = a.is_finite() ? (b.raw() - a.raw()) : 4.0;
            double h0 = std::min(1.0, width / 4.0);
            for (double h : shrink_steps(h0, b.raw(), 53)) {
                double x = b.raw() - h;
                if (ExtReal(x) > a) xs.push_back(x);
            }
        } else {
            double x0 = 4.0;
            while (a.is_finite() && x0 <= a.raw()) x0 *= 2;
            for (int k = 0; k < inf_steps; ++k) xs.push_back(toward_infinity(x0, k));
        }
    } else {
        if (a.is_finite()) {
            double width = b.is_finite() ? (b.raw() - a.raw()) : 4.0;
            double h0 = std::min(1.0, width / 4.0);
            for (double h : shrink_steps(h0, a.raw(), 53)) {
                double x = a.raw() + h;
                if (ExtReal(x) < b) xs.push_back(x);
            }
        } else {
            double x0 = -4.0;
            while (b.is_finite() && x0 >= b.raw()) x0 *= 2;
            for (int k = 0; k < inf_steps; ++k) xs.push_back(toward_infinity(x0, k));
        }
    }
    return xs;
}

template <RegulatedFn F>
std::vector<double> endpoint_schedule(const F& f, Endpoint which, int inf_steps = 21) {
    return interval_schedule(f.domain_a(), f.domain_b(), which, inf_steps);
}

// Classifies f's approach to an endpoint by the side-facing one-sided values
// (f- toward the upper end, f+ toward the lower). side_left overrides which
// of the two limit functions is sampled.
template <RegulatedFn F>
LimitEstimate end_behavior(const F& f, Endpoint which, const LimitOptions& opt = {},
                           std::optional<bool> side_left = std::nullopt) {
    std::vector<double> xs = endpoint_schedule(f, which);
    bool take_left = side_left ? *side_left : (which == Endpoint::upper);
    LimitOptions o = opt;
    o.max_samples = std::min<int>(o.max_samples, static_cast<int>(xs.size()));
    return estimate_limit(
        [&](int k) -> std::optional<double> {
            if (k >= static_cast<int>(xs.size())) return std::nullopt;
            OneSidedPair p = f.one_sided(xs[static_cast<std::size_t>(k)]);
            ExtReal v = take_left ? p.left : p.right;
            return v.finite();
        },
        o);
}

}  // namespace regcalc
