#include <catch2/catch_amalgamated.hpp>

#include <regcalc/fnformat.hpp>
#include <regcalc/stieltjes.hpp>

#include "support.hpp"

#include <cmath>

using namespace regcalc;

namespace {

const FnFile& item5() {
    static FnFile ff = load_fn_file(testsup::corpus_path("sec2item5.fn"));
    return ff;
}

PiecewiseFn id_on(double a, double b) {
    return PiecewiseFn::identity(ExtReal(a), ExtReal(b));
}

}  // namespace

TEST_CASE("jump ratio at a shared discontinuity") {
    // f jumps by 3 where alpha jumps by 2, so the derivative there is 3/2
    FnFile ff = parse_fn_text(
        "fn f on (0,2): piece (0,1]: x; piece (1,2]: x + 3\n"
        "fn a on (0,2): piece (0,1]: x; piece (1,2]: x + 2\n");
    DerivativeResult d = d_alpha(ff.fn("f"), ff.fn("a"), 1.0);
    CHECK(d.method == DerivMethod::jump_ratio);
    CHECK(d.value.raw() == Catch::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("a jump of alpha forces locally constant-in-measure behavior") {
    // alpha jumps, f continuous: derivative 0 at the jump point
    FnFile ff = parse_fn_text(
        "fn f on (0,2): piece (0,2]: x^2\n"
        "fn a on (0,2): piece (0,1]: x; piece (1,2]: x + 5\n");
    DerivativeResult d = d_alpha(ff.fn("f"), ff.fn("a"), 1.0);
    CHECK(d.method == DerivMethod::jump_ratio);
    CHECK(d.value.raw() == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("classical shortcut averages the one-sided slopes") {
    // |x| against the identity: slopes -1 and +1 average to 0
    FnFile ff = item5();
    DerivativeResult d0 = d_alpha(ff.fn("absf"), ff.fn("id"), 0.0);
    CHECK(d0.method == DerivMethod::classical_shortcut);
    CHECK(d0.value.raw() == Catch::Approx(0.0).margin(1e-7));

    // away from the kink the derivative is the plain slope
    CHECK(d_alpha(ff.fn("absf"), ff.fn("id"), 1.0).value.raw() ==
          Catch::Approx(1.0).epsilon(1e-9));
    CHECK(d_alpha(ff.fn("absf"), ff.fn("id"), -1.0).value.raw() ==
          Catch::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("numeric limit handles oscillation that defeats one-sided slopes") {
    // x sin(1/x) + 2x (left) / x sin(1/x) (right): neither one-sided classical
    // derivative exists at 0, yet the generalized quotient converges to 1
    FnFile ff = item5();
    DerivativeResult d = d_alpha(ff.fn("g"), ff.fn("id"), 0.0);
    CHECK(d.method == DerivMethod::numeric_limit);
    CHECK(d.value.raw() == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("the numeric path and the shortcut agree where both apply") {
    FnFile ff = parse_fn_text("fn f on (-2,2): piece (-2,2]: x^3 - x\n");
    PiecewiseFn id = id_on(-2.0, 2.0);
    DAlphaOptions no_shortcut;
    no_shortcut.allow_shortcut = false;
    for (double x : {-1.0, -0.25, 0.5, 1.25}) {
        DerivativeResult fast = d_alpha(ff.fn("f"), id, x);
        DerivativeResult slow = d_alpha(ff.fn("f"), id, x, no_shortcut);
        CHECK(fast.method == DerivMethod::classical_shortcut);
        CHECK(slow.method == DerivMethod::numeric_limit);
        CHECK(fast.value.raw() == Catch::Approx(3 * x * x - 1).epsilon(1e-9));
        CHECK(slow.value.raw() == Catch::Approx(fast.value.raw()).epsilon(1e-6));
    }
}

TEST_CASE("derivatives of the one-sided views coincide with the base") {
    // D f, D f-, D f+ are one and the same function
    FnFile ff = parse_fn_text(
        "fn f on (0,2): piece (0,1]: x^2; piece (1,2]: x^2 + 1\n"
        "fn a on (0,2): piece (0,1]: x; piece (1,2]: x + 1\n");
    const PiecewiseFn& f = ff.fn("f");
    const PiecewiseFn& alpha = ff.fn("a");
    OneSideView<PiecewiseFn> fm(f, true), fp(f, false);
    for (double x : {0.5, 1.0, 1.5}) {
        double base = d_alpha(f, alpha, x).value.raw();
        CHECK(d_alpha(fm, alpha, x).value.raw() == Catch::Approx(base).margin(1e-6));
        CHECK(d_alpha(fp, alpha, x).value.raw() == Catch::Approx(base).margin(1e-6));
    }
}

TEST_CASE("the opposite one-sided pairing gives the same derivative") {
    FnFile ff = parse_fn_text(
        "fn f on (0,2): piece (0,1]: 2*x; piece (1,2]: 2*x + 1\n"
        "fn a on (0,2): piece (0,1]: x; piece (1,2]: x + 1\n");
    SymmetricCheck sc = d_alpha_symmetric_check(ff.fn("f"), ff.fn("a"), 1.0);
    CHECK(sc.agree);
    CHECK(sc.primary.value.raw() == Catch::Approx(sc.secondary.value.raw()).epsilon(1e-6));

    SymmetricCheck smooth = d_alpha_symmetric_check(ff.fn("f"), ff.fn("a"), 0.5);
    CHECK(smooth.agree);
}

TEST_CASE("alpha must increase near the point") {
    FnFile ff = parse_fn_text(
        "fn f on (-1,1): piece (-1,1]: x^2\n"
        "fn down on (-1,1): piece (-1,1]: 0 - x\n");
    CHECK_THROWS_AS(d_alpha(ff.fn("f"), ff.fn("down"), 0.0), PreconditionError);
}

TEST_CASE("an unsettled quotient raises instead of guessing") {
    // sin(1/x) has no one-sided limits at 0, so the function is not regulated
    // there and the derivative query cannot produce an answer
    FnFile ff = parse_fn_text("fn f on (-1,1): piece (-1,1]: sin(1/x)\n");
    PiecewiseFn id = id_on(-1.0, 1.0);
    CHECK_THROWS_AS(d_alpha(ff.fn("f"), id, 0.0), Error);
}

TEST_CASE("derivative at a point where only the difference quotient settles") {
    // f(x) = x + |x|/2 has distinct one-sided slopes at 0; with alpha = x the
    // average (1/2 + 3/2)/2 = 1 is the generalized derivative
    FnFile ff = parse_fn_text(
        "fn f on (-1,1): piece (-1,0]: x/2; piece (0,1]: 3*x/2\n");
    PiecewiseFn id = id_on(-1.0, 1.0);
    DerivativeResult d = d_alpha(ff.fn("f"), id, 0.0);
    CHECK(d.value.raw() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("product rule in both displayed forms") {
    FnFile ff = parse_fn_text(
        "fn f on (0,2): piece (0,1]: x; piece (1,2]: x + 1\n"
        "fn g on (0,2): piece (0,1]: 2 - x; piece (1,2]: 4 - x\n"
        "fn a on (0,2): piece (0,1]: x; piece (1,2]: x + 1\n");
    const PiecewiseFn& alpha = ff.fn("a");

    RuleTriple at_jump = product_rule(ff.fn("f"), ff.fn("g"), alpha, 1.0);
    CHECK(at_jump.agree);
    CHECK(at_jump.lhs.raw() == Catch::Approx(at_jump.rhs1.raw()).epsilon(1e-6));
    CHECK(at_jump.lhs.raw() == Catch::Approx(at_jump.rhs2.raw()).epsilon(1e-6));

    RuleTriple smooth = product_rule(ff.fn("f"), ff.fn("g"), alpha, 0.5);
    CHECK(smooth.agree);
}

TEST_CASE("quotient rule in both displayed forms") {
    FnFile ff = parse_fn_text(
        "fn f on (0,2): piece (0,1]: x; piece (1,2]: x + 1\n"
        "fn g on (0,2): piece (0,1]: 2 + x; piece (1,2]: 4 + x\n"
        "fn a on (0,2): piece (0,1]: x; piece (1,2]: x + 1\n");
    const PiecewiseFn& alpha = ff.fn("a");

    RuleTriple at_jump = quotient_rule(ff.fn("f"), ff.fn("g"), alpha, 1.0);
    CHECK(at_jump.agree);

    RuleTriple smooth = quotient_rule(ff.fn("f"), ff.fn("g"), alpha, 1.5);
    CHECK(smooth.agree);

    // g touching zero on either side is rejected
    FnFile zz = parse_fn_text(
        "fn f on (-1,1): piece (-1,1]: 1\n"
        "fn g on (-1,1): piece (-1,0]: x; piece (0,1]: x + 1\n");
    PiecewiseFn id = id_on(-1.0, 1.0);
    CHECK_THROWS_AS(quotient_rule(zz.fn("f"), zz.fn("g"), id, 0.0), PreconditionError);
}

TEST_CASE("derivative against a staircase works at atoms, refuses flat spans") {
    // alpha constant except unit jumps at the integers: at a shared jump the
    // ratio of jumps is the answer; between jumps alpha fails the strictly-
    // increasing precondition and the query is refused rather than guessed
    FnFile ff = parse_fn_text(
        "fn flat on (0,4): piece (0,1]: 0; piece (1,2]: 1; piece (2,3]: 2; piece (3,4]: 3\n"
        "fn f on (0,4): piece (0,2]: x^2; piece (2,4]: x^2 + 2\n");
    const PiecewiseFn& stair = ff.fn("flat");
    DerivativeResult shared = d_alpha(ff.fn("f"), stair, 2.0);
    CHECK(shared.method == DerivMethod::jump_ratio);
    CHECK(shared.value.raw() == Catch::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(d_alpha(ff.fn("f"), stair, 1.5), PreconditionError);
}
