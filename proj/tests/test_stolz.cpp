#include <catch2/catch_amalgamated.hpp>

#include <regcalc/fnformat.hpp>
#include <regcalc/stieltjes.hpp>
#include <regcalc/stolz.hpp>

#include "support.hpp"

#include <cmath>

using namespace regcalc;

namespace {

StolzReport run_corpus(const char* file) {
    FnFile ff = load_fn_file(testsup::corpus_path(file));
    return stolz_report(SequencePolyline::from_expr(ff.seq("f")),
                        SequencePolyline::from_expr(ff.seq("g")));
}

}  // namespace

TEST_CASE("constant increments give ratio 1") {
    StolzReport rep = run_corpus("stolz-const.seq");
    REQUIRE(rep.rule.applicable);
    CHECK(rep.rule.conclusion->raw() == Catch::Approx(1.0).margin(1e-9));
    CHECK(rep.construction_ok);
    CHECK(rep.positivity_ok);
    CHECK(rep.agree);
    CHECK(rep.raw_ratio == Catch::Approx(1.0));
}

TEST_CASE("odd increments over unit increments diverge like n") {
    StolzReport rep = run_corpus("stolz-odd.seq");
    REQUIRE(rep.rule.applicable);
    REQUIRE(rep.rule.conclusion.has_value());
    CHECK(rep.rule.conclusion->is_pos_inf());
    CHECK(rep.oracle.status == LimitStatus::diverged_pos);
    CHECK(rep.construction_ok);
    CHECK(rep.agree);
}

TEST_CASE("harmonic partial sums over n tend to 0") {
    StolzReport rep = run_corpus("stolz-cesaro.seq");
    REQUIRE(rep.rule.applicable);
    CHECK(std::abs(rep.rule.conclusion->raw()) <= 1e-6);
    CHECK(rep.agree);
    // raw probe at n = 10^6: H_n / n
    CHECK(rep.raw_n == 1000000);
    CHECK(rep.raw_ratio == Catch::Approx(1.439272672286499e-05).epsilon(1e-9));
}

TEST_CASE("the interpolating polyline carries the increments as derivatives") {
    // F interpolates the partial sums: between integers its generalized slope
    // is the next increment; at the integer kinks the two neighbours average
    FnFile ff = load_fn_file(testsup::corpus_path("stolz-odd.seq"));
    SequencePolyline f = SequencePolyline::from_expr(ff.seq("f"));
    PiecewiseFn id = PiecewiseFn::identity(ExtReal(0.0), ExtReal::pos_inf());
    auto incr = [](long long n) { return 2.0 * n + 1.0; };  // matches the file

    for (long long m : {1LL, 2LL, 5LL, 17LL}) {
        double inside = d_alpha(f, id, static_cast<double>(m) + 0.5).value.raw();
        CHECK(inside == Catch::Approx(incr(m + 2)).epsilon(1e-9));
        double kink = d_alpha(f, id, static_cast<double>(m) + 1.0).value.raw();
        CHECK(kink == Catch::Approx(0.5 * (incr(m + 2) + incr(m + 3))).epsilon(1e-9));
    }
}

TEST_CASE("construction checks compare slopes and kink averages") {
    for (const char* file : {"stolz-const.seq", "stolz-odd.seq", "stolz-cesaro.seq"}) {
        INFO(file);
        StolzReport rep = run_corpus(file);
        CHECK(rep.construction_ok);
        CHECK(rep.construction_note.empty());
    }
}

TEST_CASE("finite data cannot certify an asymptotic boundary case") {
    std::vector<double> fs, gs;
    for (int i = 1; i <= 30; ++i) {
        fs.push_back(2.0 * i + 1.0);
        gs.push_back(1.0);
    }
    StolzReport rep = stolz_report(SequencePolyline::from_data(fs),
                                   SequencePolyline::from_data(gs));
    CHECK_FALSE(rep.rule.applicable);
    bool boundary_failed = false;
    for (const Hypothesis& h : rep.rule.hypotheses)
        if (h.status == HypothesisStatus::failed && h.name.find("boundary") != std::string::npos)
            boundary_failed = true;
    CHECK(boundary_failed);
}

TEST_CASE("sequence expressions must use n") {
    CHECK_THROWS_AS(SequencePolyline::from_expr(Expr::parse("x + 1")), ConstructionError);
}

TEST_CASE("non-monotone denominator increments fail the sign hypothesis") {
    // g increments alternate in sign, so the denominator is not monotone
    SequencePolyline f([](long long) { return 1.0; });
    SequencePolyline g([](long long n) { return n % 2 == 0 ? 1.0 : -1.0; });
    StolzReport rep = stolz_report(f, g);
    CHECK_FALSE(rep.rule.applicable);
    CHECK(rep.rule.hypothesis_failed());
}

TEST_CASE("short data errors cleanly") {
    CHECK_THROWS_AS(stolz_report(SequencePolyline::from_data({1.0, 2.0}),
                                 SequencePolyline::from_data({1.0, 1.0})),
                    Error);
}
