#include <doctest.h>

#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"

using namespace modparam;

namespace {

// Compare two series on the window both claim to know.
bool agree(const FracSeries& a, const FracSeries& b) {
    Rat t = std::min(a.trunc_order(), b.trunc_order());
    return truncate(a, t) == truncate(b, t);
}

FracSeries random_series(std::mt19937& rng, long long w) {
    std::uniform_int_distribution<long long> tn(4 * w, 8 * w);
    Rat trunc = rat(tn(rng), w);
    FracSeries s(w, trunc);
    std::uniform_int_distribution<int> nterms(1, 6);
    std::uniform_int_distribution<long long> key(-2 * w, tn(rng) - 1);
    std::uniform_int_distribution<long long> cn(-6, 6);
    std::uniform_int_distribution<long long> cd(1, 3);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        long long k = key(rng);
        if (rat(k, w) >= trunc) continue;
        long long num = cn(rng);
        if (num == 0) num = 1;
        s.set(rat(k, w), rat(num, cd(rng)));
    }
    return s;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("ring axioms on random series") {
    std::mt19937 rng(914007);
    const long long grids[] = {1, 2, 3, 4, 6};
    int checked = 0;
    for (int iter = 0; iter < 200; ++iter) {
        long long w = grids[iter % 5];
        FracSeries a = random_series(rng, w);
        FracSeries b = random_series(rng, grids[(iter + 2) % 5]);
        FracSeries c = random_series(rng, grids[(iter + 3) % 5]);
        REQUIRE(agree(add(a, b), add(b, a)));
        REQUIRE(agree(add(add(a, b), c), add(a, add(b, c))));
        REQUIRE(agree(mul(a, b), mul(b, a)));
        REQUIRE(agree(mul(mul(a, b), c), mul(a, mul(b, c))));
        REQUIRE(agree(mul(a, add(b, c)), add(mul(a, b), mul(a, c))));
        REQUIRE(agree(sub(a, a), FracSeries::zero(a.grid(), a.trunc_order())));
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("theta is a derivation") {
    std::mt19937 rng(275601);
    for (int iter = 0; iter < 100; ++iter) {
        FracSeries a = random_series(rng, 1 + iter % 4);
        FracSeries b = random_series(rng, 1 + (iter + 1) % 4);
        REQUIRE(agree(theta(mul(a, b)), add(mul(theta(a), b), mul(a, theta(b)))));
    }
    FracSeries m = FracSeries::monomial(rat(-5, 3), rat(7, 2), rat(4));
    FracSeries tm = theta(m);
    CHECK(tm.coeff(rat(-5, 3)) == rat(-5, 3) * rat(7, 2));
    CHECK(tm.term_count() == 1);
}

TEST_CASE("inversion") {
    std::mt19937 rng(660112);
    for (int iter = 0; iter < 50; ++iter) {
        FracSeries a = random_series(rng, 1 + iter % 3);
        if (a.known_zero()) continue;
        FracSeries inv = invert(a);
        FracSeries prod = mul(a, inv);
        FracSeries one_t = truncate(FracSeries::one(rat(100)), prod.trunc_order());
        REQUIRE(prod == one_t);
        REQUIRE(agree(invert(inv), a));
    }
    CHECK_THROWS_AS(invert(FracSeries::zero(2, rat(5))), ZeroSeriesInverted);

    // geometric series
    FracSeries g(1, rat(10));
    g.set(rat(0), rat(1));
    g.set(rat(1), rat(-1));
    FracSeries ig = invert(g);
    for (long long n = 0; n < 9; ++n) CHECK(ig.coeff(rat(n)) == 1);
}

TEST_CASE("truncation is honest under multiplication") {
    std::mt19937 rng(371920);
    for (int iter = 0; iter < 50; ++iter) {
        FracSeries a = random_series(rng, 2);
        FracSeries b = random_series(rng, 3);
        FracSeries full = mul(a, b);
        // Shortening one factor must not change what the product claims on the
        // shortened window.
        Rat cut = a.trunc_order() - rat(1);
        if (cut <= a.ord()) continue;
        FracSeries part = mul(truncate(a, cut), b);
        REQUIRE(part.trunc_order() <= full.trunc_order());
        REQUIRE(agree(part, full));
    }
}

TEST_CASE("rescale and pow") {
    std::mt19937 rng(150217);
    for (int iter = 0; iter < 30; ++iter) {
        FracSeries a = random_series(rng, 1 + iter % 4);
        REQUIRE(rescale(rescale(a, rat(2)), rat(1, 2)) == a);
        REQUIRE(agree(pow(a, 3), mul(a, mul(a, a))));
    }
    CHECK_THROWS_AS(rescale(random_series(rng, 2), rat(0)), std::invalid_argument);
}

TEST_CASE("partition numbers from 1/eta") {
    FracSeries inv_eta = eta_quotient(parse_eta_spec("1^-1"), rat(10));
    const long long p[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30};
    for (long long n = 0; n <= 9; ++n)
        CHECK(inv_eta.coeff(rat(24 * n - 1, 24)) == rat(p[n]));
    CHECK(inv_eta.ord() == rat(-1, 24));
}

TEST_CASE("integer grid coercion") {
    FracSeries e1 = eta_quotient(parse_eta_spec("1^1"), rat(9));
    CHECK(e1.grid() == 24);
    FracSeries raw = pow(e1, 24);  // integer exponents, still on the 1/24 grid
    CHECK(raw.grid() == 24);
    FracSeries z = coerce_integer_grid(raw);
    CHECK(z.grid() == 1);
    CHECK(z.coeff(1) == 1);
    CHECK(z.coeff(2) == -24);
    CHECK(z.coeff(3) == 252);
    CHECK(z.coeff(4) == -1472);
    FracSeries direct = eta_quotient(parse_eta_spec("1^24"), rat(6));
    CHECK(direct.grid() == 1);
    Rat t = std::min(z.trunc_order(), direct.trunc_order());
    CHECK(truncate(z, t) == truncate(direct, t));

    CHECK_THROWS_AS(coerce_integer_grid(e1), NonIntegerExponents);
}

TEST_CASE("equality is grid independent") {
    FracSeries a = FracSeries::monomial(rat(1, 2), rat(3), rat(5));
    CHECK(a.grid() == 2);
    FracSeries b(4, rat(5));
    b.set(rat(1, 2), rat(3));
    CHECK(b.grid() == 4);
    CHECK(a == b);
    CHECK(b == a);
    FracSeries c(4, rat(6));  // same term, longer knowledge window
    c.set(rat(1, 2), rat(3));
    CHECK(a != c);
    CHECK(a == truncate(c, rat(5)));
}

TEST_CASE("coefficient access rules") {
    FracSeries a = FracSeries::monomial(rat(1, 3), rat(2), rat(4));
    CHECK(a.coeff(rat(1, 3)) == 2);
    CHECK(a.coeff(rat(2, 3)) == 0);   // on grid, below trunc, absent
    CHECK(a.coeff(rat(1, 2)) == 0);   // off grid below trunc: provably zero
    CHECK_THROWS_AS(a.coeff(rat(4)), std::out_of_range);
    CHECK_THROWS_AS(a.coeff(rat(9, 2)), std::out_of_range);
    CHECK_THROWS_AS(a.set(rat(1, 2), rat(1)), OffGridExponent);
    CHECK_THROWS_AS(a.set(rat(5), rat(1)), std::invalid_argument);
    CHECK_THROWS_AS(truncate(a, rat(6)), std::invalid_argument);  // cannot extend
}

TEST_CASE("file round trip is bit exact") {
    FracSeries a(6, rat(17, 6));
    a.set(rat(-7, 6), rat(-3, 7));
    a.set(rat(0), rat(22));
    a.set(rat(5, 2), rat(1, 9));
    std::ostringstream first;
    write_series(first, a);
    std::istringstream in(first.str());
    FracSeries back = read_series(in);
    CHECK(back == a);
    CHECK(back.grid() == a.grid());
    CHECK(back.trunc_order() == a.trunc_order());
    std::ostringstream second;
    write_series(second, back);
    CHECK(first.str() == second.str());

    std::string path = "series_roundtrip.tmp";
    write_series_file(path, a);
    FracSeries from_file = read_series_file(path);
    CHECK(from_file == a);
    std::remove(path.c_str());
}

TEST_CASE("series reader rejects malformed input") {
    auto reject = [](const std::string& text) {
        std::istringstream is(text);
        CHECK_THROWS_AS(read_series(is), std::exception);
    };
    auto reject_arg = [](const std::string& text) {
        std::istringstream is(text);
        CHECK_THROWS_AS(read_series(is), std::invalid_argument);
    };
    reject_arg("grid=2 trunc=5/1\n");             // bad header
    reject_arg("w=2\n");                          // missing trunc
    reject_arg("w=0 trunc=5/1\n");                // bad grid
    {
        std::istringstream is("w=2 trunc=5/1\n1/3 1\n");
        CHECK_THROWS_AS(read_series(is), OffGridExponent);  // off grid
    }
    reject_arg("w=1 trunc=3/1\n3 1\n");           // at trunc
    reject_arg("w=1 trunc=3/1\n1 0\n");           // explicit zero
    reject_arg("w=1 trunc=5/1\n2 1\n1 1\n");      // not increasing
    reject("w=1 trunc=5/1\n1 0.5\n");             // decimal coefficient
    reject("w=1 trunc=5/1\n1.5 1\n");             // decimal exponent
}

TEST_CASE("string rendering") {
    FracSeries a = FracSeries::monomial(rat(-1, 24), rat(1), rat(2));
    std::string s = a.str();
    CHECK(s.find("q^(-1/24)") != std::string::npos);
    CHECK(s.find("O(q^") != std::string::npos);
}

}  // TEST_SUITE
