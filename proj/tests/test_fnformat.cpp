#include <catch2/catch_amalgamated.hpp>

#include <regcalc/fnformat.hpp>

#include "support.hpp"

using namespace regcalc;

TEST_CASE("minimal definitions parse") {
    FnFile ff = parse_fn_text(
        "fn f on (0, 2):\n"
        "  piece (0, 1]: x^2;\n"
        "  piece (1, 2]: 2*x - 1\n"
        "\n"
        "seq s: 1/n\n");
    REQUIRE(ff.has_fn("f"));
    REQUIRE(ff.has_seq("s"));
    const PiecewiseFn& f = ff.fn("f");
    CHECK(f.value_at(0.5) == 0.25);
    CHECK(f.value_at(1.0) == 1.0);   // cells are right-closed
    CHECK(f.value_at(1.5) == 2.0);
    CHECK(ff.seq("s").eval_n(4) == 0.25);
}

TEST_CASE("families parse with index bounds and infinite ends") {
    FnFile ff = parse_fn_text(
        "fn stair on (0, +inf):\n"
        "  family n >= 0 on (n, n+1]: x + n\n");
    const PiecewiseFn& f = ff.fn("stair");
    CHECK(f.value_at(0.5) == 0.5);
    CHECK(f.value_at(3.25) == Catch::Approx(6.25));
    CHECK(f.domain_b().is_pos_inf());
}

TEST_CASE("comments and whitespace are insignificant") {
    FnFile ff = parse_fn_text(
        "# leading comment\n"
        "fn f on (0, 1):  # trailing comment\n"
        "  piece (0, 1]:  # another\n"
        "    x\n");
    CHECK(ff.fn("f").value_at(0.5) == 0.5);
}

TEST_CASE("grammar errors are rejected") {
    CHECK_THROWS_AS(parse_fn_text("fn f on (0,1): piece (0,1): x"), Error);  // not right-closed
    CHECK_THROWS_AS(parse_fn_text("fn f on (0,1):"), Error);                 // no clauses
    CHECK_THROWS_AS(parse_fn_text("fn on on (0,1): piece (0,1]: x"), Error); // reserved name
    CHECK_THROWS_AS(parse_fn_text("fn f on (1,0): piece (1,0]: x"), Error);  // reversed bounds
    CHECK_THROWS_AS(parse_fn_text("garbage"), Error);
    CHECK_THROWS_AS(
        parse_fn_text("fn f on (0,1): piece (0,1]: x\nfn f on (0,1): piece (0,1]: x"),
        Error);  // duplicate name
    CHECK_THROWS_AS(parse_fn_text("seq s: x + n"), Error);  // sequences may not use x
}

TEST_CASE("validation rejects broken cell structure") {
    // gap between pieces
    CHECK_THROWS_AS(parse_fn_text("fn f on (0,3): piece (0,1]: x; piece (2,3]: x"), Error);
    // overlap
    CHECK_THROWS_AS(parse_fn_text("fn f on (0,3): piece (0,2]: x; piece (1,3]: x"), Error);
    // family not tiling (hole between successive cells)
    CHECK_THROWS_AS(
        parse_fn_text("fn f on (0,+inf): family n >= 0 on (3*n, 3*n+1]: x"), Error);
    // pieces not covering the declared domain
    CHECK_THROWS_AS(parse_fn_text("fn f on (0,2): piece (0,1]: x"), Error);
}

TEST_CASE("regularity spot checks reject non-regulated bodies") {
    // 1/x has no finite one-sided limits at the interior junction 0
    CHECK_THROWS_AS(
        parse_fn_text("fn f on (-1,1): piece (-1,0]: 1/x; piece (0,1]: 1/x"), Error);
}

TEST_CASE("the shipped corpus parses and validates") {
    for (const char* name : {"sec31.fn", "sec51.fn", "sec52.fn", "sec54.fn",
                             "sec2item5.fn", "remark3.fn"}) {
        INFO(name);
        FnFile ff = load_fn_file(testsup::corpus_path(name));
        CHECK(!ff.fns.empty());
    }
    for (const char* name : {"stolz-const.seq", "stolz-odd.seq", "stolz-cesaro.seq"}) {
        INFO(name);
        FnFile ff = load_fn_file(testsup::corpus_path(name));
        CHECK(ff.has_seq("f"));
        CHECK(ff.has_seq("g"));
    }
}

TEST_CASE("missing files and missing names fail cleanly") {
    CHECK_THROWS_AS(load_fn_file("/nonexistent/path.fn"), Error);
    FnFile ff = parse_fn_text("fn f on (0,1): piece (0,1]: x");
    CHECK_THROWS_AS(ff.fn("g"), Error);
    CHECK_THROWS_AS(ff.seq("f"), Error);
}

TEST_CASE("sequence data files parse index-value pairs") {
    std::vector<double> v = parse_sequence_data("1 0.5\n2 0.25\n# comment\n\n3 0.125\n");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.5);
    CHECK(v[2] == 0.125);

    CHECK_THROWS_AS(parse_sequence_data(""), Error);
    CHECK_THROWS_AS(parse_sequence_data("1 0.5\n3 0.25\n"), Error);  // index gap
    CHECK_THROWS_AS(parse_sequence_data("1\n"), Error);              // missing value
    CHECK_THROWS_AS(parse_sequence_data("2 0.5\n"), Error);          // must start at 1
}
