// Shared helpers for the test suite: corpus paths, a deterministic RNG, and
// generators for random expressions and piecewise functions.
#pragma once

#include <regcalc/errors.hpp>
#include <regcalc/expr.hpp>
#include <regcalc/fnformat.hpp>
#include <regcalc/piecewise.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace testsup {

inline std::string corpus_path(const std::string& name) {
    return std::string(CORPUS_DIR) + "/" + name;
}

// splitmix64: tiny, seedable, and identical on every platform, so failures
// reproduce from the seed alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // inclusive on both ends
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return unit() < p; }

private:
    std::uint64_t state_;
};

// ---- random expression trees --------------------------------------------------

// Node pool for random trees. Leaves are x, small nonnegative literals, pi, e;
// negative constants appear only through an explicit neg node so the printed
// form re-parses to the identical tree.
inline regcalc::Expr random_tree(Rng& rng, int depth) {
    using regcalc::Expr;
    if (depth <= 0 || rng.chance(0.28)) {
        switch (rng.uniform_int(0, 5)) {
            case 0: return Expr::x();
            case 1: return Expr::number(static_cast<double>(rng.uniform_int(0, 9)));
            case 2: return Expr::number(rng.uniform(0.0, 4.0));
            case 3: return Expr::pi();
            case 4: return Expr::e();
            default: return Expr::x();
        }
    }
    switch (rng.uniform_int(0, 11)) {
        case 0: return Expr::add(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 1: return Expr::sub(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 2: return Expr::mul(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 3: return Expr::div(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 4:
            // integer exponents keep pow well-defined to the left of zero
            return Expr::pow(random_tree(rng, depth - 1),
                             Expr::number(static_cast<double>(rng.uniform_int(2, 4))));
        case 5: return Expr::neg(random_tree(rng, depth - 1));
        case 6: return Expr::sin(random_tree(rng, depth - 1));
        case 7: return Expr::cos(random_tree(rng, depth - 1));
        case 8: return Expr::abs(random_tree(rng, depth - 1));
        case 9: return Expr::sqrt(Expr::abs(random_tree(rng, depth - 1)));
        case 10: return Expr::exp(Expr::sin(random_tree(rng, depth - 1)));
        default: return Expr::cbrt(random_tree(rng, depth - 1));
    }
}

// Central finite difference with a two-step self-consistency gate: a point
// counts only when fd(h) and fd(h/2) agree, i.e. the stencil is trusted
// before it is compared against the symbolic derivative.
struct FdProbe {
    double fd = 0;       // best finite-difference estimate
    double sym = 0;      // symbolic derivative at the point
    bool usable = false;
};

inline FdProbe fd_probe(const regcalc::Expr& f, const regcalc::Expr& df, double x) {
    FdProbe out;
    const double h = 1e-4;
    try {
        double d1 = (f.eval_x(x + h) - f.eval_x(x - h)) / (2 * h);
        double d2 = (f.eval_x(x + h / 2) - f.eval_x(x - h / 2)) / h;
        double sym = df.eval_x(x);
        if (!std::isfinite(d1) || !std::isfinite(d2) || !std::isfinite(sym)) return out;
        double scale = 1.0 + std::max(std::abs(sym), std::abs(d2));
        if (std::abs(d1 - d2) > 2e-6 * scale) return out;  // stencil unstable here
        out.fd = d2;
        out.sym = sym;
        out.usable = true;
    } catch (const regcalc::Error&) {
    }
    return out;
}

// ---- random piecewise functions -------------------------------------------------

// polynomial c0 + c1 x + ... built from the expression builders
inline regcalc::Expr poly_expr(Rng& rng, int deg, double lo, double hi) {
    using regcalc::Expr;
    Expr acc = Expr::number(0);
    for (int k = 0; k <= deg; ++k) {
        double c = rng.uniform(lo, hi);
        Expr term = Expr::number(std::abs(c));
        if (c < 0) term = Expr::neg(term);
        for (int j = 0; j < k; ++j) term = Expr::mul(term, Expr::x());
        acc = Expr::add(acc, term);
    }
    return acc;
}

// strictly increasing breakpoint ladder a < q1 < ... < qk < b
inline std::vector<double> random_cuts(Rng& rng, double a, double b, int count) {
    std::vector<double> qs;
    for (int i = 0; i < count; ++i) qs.push_back(rng.uniform(a + 0.05, b - 0.05));
    std::sort(qs.begin(), qs.end());
    // enforce separation so junctions stay numerically distinct
    std::vector<double> out;
    for (double q : qs)
        if (out.empty() || q - out.back() > 0.05) out.push_back(q);
    return out;
}

// Generic jumpy test subject: random polynomial bodies on 1-4 cells of (a,b).
inline regcalc::PiecewiseFn random_piecewise(Rng& rng, double a = -2.0, double b = 2.0,
                                             int max_cuts = 3, int max_deg = 3) {
    using namespace regcalc;
    std::vector<double> cuts = random_cuts(rng, a, b, static_cast<int>(rng.uniform_int(0, max_cuts)));
    std::vector<Piece> ps;
    double left = a;
    for (double q : cuts) {
        ps.push_back(Piece{left, q, poly_expr(rng, static_cast<int>(rng.uniform_int(0, max_deg)),
                                              -3.0, 3.0)});
        left = q;
    }
    ps.push_back(Piece{left, b, poly_expr(rng, static_cast<int>(rng.uniform_int(0, max_deg)),
                                          -3.0, 3.0)});
    return PiecewiseFn(ExtReal(a), ExtReal(b), std::move(ps), {});
}

// Strictly increasing subject: every cell body has positive slope and every
// junction jumps upward, so f-, f+ are strictly increasing by construction.
inline regcalc::PiecewiseFn random_increasing(Rng& rng, double a = -2.0, double b = 2.0) {
    using namespace regcalc;
    std::vector<double> cuts = random_cuts(rng, a, b, static_cast<int>(rng.uniform_int(0, 3)));
    std::vector<Piece> ps;
    double left = a;
    double base = rng.uniform(-2.0, 2.0);
    auto body = [&](double at_left) {
        // slope in [0.2, 2.5] keeps the increase strict but tame
        double slope = rng.uniform(0.2, 2.5);
        Expr e = Expr::add(Expr::number(at_left - slope * left),
                           Expr::mul(Expr::number(slope), Expr::x()));
        return std::pair<Expr, double>(e, slope);
    };
    for (double q : cuts) {
        auto [e, slope] = body(base);
        ps.push_back(Piece{left, q, e});
        base += slope * (q - left) + rng.uniform(0.0, 1.0);  // jump >= 0 at the junction
        left = q;
    }
    auto [e, slope] = body(base);
    (void)slope;
    ps.push_back(Piece{left, b, e});
    return PiecewiseFn(ExtReal(a), ExtReal(b), std::move(ps), {});
}

// Same shape with one planted violation: either a cell of negative slope or a
// downward jump, so none of the increasing-characterization statements hold.
inline regcalc::PiecewiseFn random_nonincreasing(Rng& rng, double a = -2.0, double b = 2.0) {
    using namespace regcalc;
    double q = rng.uniform(a + 0.3, b - 0.3);
    std::vector<Piece> ps;
    if (rng.chance(0.5)) {
        // downward jump at q
        double slope = rng.uniform(0.2, 1.5);
        double drop = rng.uniform(0.2, 2.0);
        ps.push_back(Piece{a, q, Expr::mul(Expr::number(slope), Expr::x())});
        ps.push_back(Piece{q, b, Expr::sub(Expr::mul(Expr::number(slope), Expr::x()),
                                           Expr::number(drop))});
    } else {
        // negative slope on the second cell
        ps.push_back(Piece{a, q, Expr::mul(Expr::number(rng.uniform(0.2, 1.5)), Expr::x())});
        ps.push_back(Piece{q, b, Expr::neg(Expr::mul(Expr::number(rng.uniform(0.2, 1.5)),
                                                     Expr::x()))});
    }
    return PiecewiseFn(ExtReal(a), ExtReal(b), std::move(ps), {});
}

// Distinct interior sample points, never closer than eps to a bound.
inline std::vector<double> interior_samples(Rng& rng, double a, double b, int count,
                                            double eps = 0.05) {
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) xs.push_back(rng.uniform(a + eps, b - eps));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace testsup
