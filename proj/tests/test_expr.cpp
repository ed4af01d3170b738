#include <catch2/catch_amalgamated.hpp>

#include <regcalc/expr.hpp>

#include "support.hpp"

#include <cmath>

using regcalc::Expr;
using regcalc::EvalError;
using regcalc::ParseError;

TEST_CASE("arithmetic precedence and associativity") {
    CHECK(Expr::parse("2 + 3*4").eval_const() == 14.0);
    CHECK(Expr::parse("2*3 + 4").eval_const() == 10.0);
    CHECK(Expr::parse("2 - 3 - 4").eval_const() == -5.0);   // left associative
    CHECK(Expr::parse("24 / 4 / 2").eval_const() == 3.0);   // left associative
    CHECK(Expr::parse("2^3^2").eval_const() == 512.0);      // right associative
    CHECK(Expr::parse("(2^3)^2").eval_const() == 64.0);
    CHECK(Expr::parse("2*3^2").eval_const() == 18.0);       // ^ binds tighter than *
    CHECK(Expr::parse("-3^2").eval_const() == 9.0);         // unary minus binds the atom
    CHECK(Expr::parse("-(3^2)").eval_const() == -9.0);
}

TEST_CASE("constants and functions evaluate") {
    CHECK(Expr::parse("pi").eval_const() == Catch::Approx(3.14159265358979).epsilon(1e-14));
    CHECK(Expr::parse("e").eval_const() == Catch::Approx(2.71828182845905).epsilon(1e-14));
    CHECK(Expr::parse("sin(pi/2)").eval_const() == Catch::Approx(1.0));
    CHECK(Expr::parse("cos(0)").eval_const() == 1.0);
    CHECK(Expr::parse("abs(0 - 3.5)").eval_const() == 3.5);
    CHECK(Expr::parse("sqrt(2)").eval_const() == Catch::Approx(std::sqrt(2.0)));
    CHECK(Expr::parse("cbrt(0 - 8)").eval_const() == -2.0);
    CHECK(Expr::parse("exp(1)").eval_const() == Catch::Approx(std::exp(1.0)));
    CHECK(Expr::parse("ln(e)").eval_const() == Catch::Approx(1.0));
    CHECK(Expr::parse("x^2 + 1").eval_x(3.0) == 10.0);
    CHECK(Expr::parse("2*n + 1").eval_n(4) == 9.0);
}

TEST_CASE("sum nodes evaluate over the index range") {
    Expr h = Expr::parse("sum(j=2..n+1: 1/j)");
    CHECK(h.eval_n(1) == Catch::Approx(0.5));
    CHECK(h.eval_n(3) == Catch::Approx(0.5 + 1.0 / 3.0 + 0.25).epsilon(1e-15));
    // empty range (upper < lower) is zero
    CHECK(Expr::parse("sum(j=2..n-5: j)").eval_n(3) == 0.0);
    // the shifted upper bound follows n
    CHECK(Expr::parse("sum(k=1..n: k)").eval_n(100) == 5050.0);
}

TEST_CASE("parse errors carry location and expectation") {
    CHECK_THROWS_AS(Expr::parse("2 +"), ParseError);
    CHECK_THROWS_AS(Expr::parse("sin x"), ParseError);
    CHECK_THROWS_AS(Expr::parse(")"), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(3)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("2 + * 3"), ParseError);
    CHECK_THROWS_AS(Expr::parse("sum(x=1..n: 1)"), ParseError);        // reserved index
    CHECK_THROWS_AS(Expr::parse("sum(j=1..n: sum(k=1..n: 1))"), ParseError);  // nested
    CHECK_THROWS_AS(Expr::parse("sum(j=1..n: x + j)"), ParseError);    // x inside body
    CHECK_THROWS_AS(Expr::parse("2 2"), ParseError);                   // trailing input
}

TEST_CASE("evaluation errors on domain violations") {
    CHECK_THROWS_AS(Expr::parse("sqrt(0 - 1)").eval_const(), EvalError);
    CHECK_THROWS_AS(Expr::parse("ln(0)").eval_const(), EvalError);
    CHECK_THROWS_AS(Expr::parse("1/0").eval_const(), EvalError);
    CHECK_THROWS_AS(Expr::parse("x").eval_const(), EvalError);   // unbound variable
    CHECK_THROWS_AS(Expr::parse("n").eval_x(1.0), EvalError);
    CHECK_THROWS_AS(Expr::parse("exp(10000)").eval_const(), EvalError);  // overflow
}

TEST_CASE("printing reparses to the identical tree") {
    for (const char* src : {"x^2 + 3*x - 1", "sin(x)*cos(x)", "-x^2", "2 - -3",
                            "sqrt(abs(x))/((1 + x^2))", "sum(j=2..n+1: 1/j) + n",
                            "cbrt(x - 5)", "exp(sin(x)) - ln(1 + abs(x))"}) {
        Expr t = Expr::parse(src);
        Expr back = Expr::parse(t.str());
        INFO(src << "  ->  " << t.str());
        CHECK(t == back);
        CHECK(back.str() == t.str());  // printing is a fixpoint
    }
}

TEST_CASE("structural equality distinguishes shapes") {
    CHECK(Expr::parse("x + 1") == Expr::parse("x + 1"));
    CHECK(Expr::parse("x + 1") != Expr::parse("1 + x"));
    CHECK(Expr::parse("sum(j=1..n: j)") == Expr::parse("sum(j=1..n: j)"));
    CHECK(Expr::parse("sum(j=1..n: j)") != Expr::parse("sum(j=2..n: j)"));
}

TEST_CASE("derivatives of the closed forms") {
    // polynomial: exact
    Expr p = Expr::parse("x^3 - 2*x + 7");
    Expr dp = p.diff();
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0})
        CHECK(dp.eval_x(x) == Catch::Approx(3 * x * x - 2).epsilon(1e-14));

    // chain rule through the unary functions
    Expr q = Expr::parse("sin(x^2) + exp(2*x) - ln(1 + x^2)");
    Expr dq = q.diff();
    for (double x : {-1.0, 0.25, 1.5}) {
        double want = 2 * x * std::cos(x * x) + 2 * std::exp(2 * x) - 2 * x / (1 + x * x);
        CHECK(dq.eval_x(x) == Catch::Approx(want).epsilon(1e-12));
    }

    // cbrt and sqrt
    Expr r = Expr::parse("cbrt(x)");
    CHECK(r.diff().eval_x(8.0) == Catch::Approx(1.0 / 12.0).epsilon(1e-12));
    Expr s = Expr::parse("sqrt(x)");
    CHECK(s.diff().eval_x(4.0) == Catch::Approx(0.25).epsilon(1e-12));

    // abs differentiates away from the kink and fails exactly at it
    Expr aa = Expr::parse("abs(x)");
    CHECK(aa.diff().eval_x(2.0) == 1.0);
    CHECK(aa.diff().eval_x(-2.0) == -1.0);
    CHECK_THROWS_AS(aa.diff().eval_x(0.0), regcalc::Error);

    // expressions constant in x differentiate to zero
    CHECK(Expr::parse("sum(j=2..n+1: 1/j)").diff().eval_n(5) == 0.0);
    CHECK(Expr::parse("pi*e").diff().eval_const() == 0.0);
}

TEST_CASE("random trees: round-trip and derivative vs finite differences") {
    // the full-size pool runs in the acceptance binary; this is the fast lane
    testsup::Rng rng(0x5eed0001ull);
    int fd_points = 0;
    for (int i = 0; i < 1500; ++i) {
        Expr t = testsup::random_tree(rng, 4);
        Expr back = Expr::parse(t.str());
        INFO("tree " << i << ": " << t.str());
        REQUIRE(t == back);

        if (!t.has_x()) continue;
        Expr dt = t.diff();
        for (int k = 0; k < 8; ++k) {
            double x = rng.uniform(-2.5, 2.5);
            testsup::FdProbe p = testsup::fd_probe(t, dt, x);
            if (!p.usable) continue;
            double scale = 1.0 + std::max(std::abs(p.sym), std::abs(p.fd));
            INFO("tree " << i << " at x=" << x << ": " << t.str());
            REQUIRE(std::abs(p.fd - p.sym) <= 1e-5 * scale);
            ++fd_points;
        }
    }
    CHECK(fd_points > 2000);  // the filter must not starve the comparison
}
