#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"
#include "modparam/periods.hpp"

using namespace modparam;

namespace {

bool agree(const FracSeries& a, const FracSeries& b) {
    Rat t = std::min(a.trunc_order(), b.trunc_order());
    return truncate(a, t) == truncate(b, t);
}

struct NewformSpec {
    long long N, k;
    const char* spec;
    double fricke;  // measured eigenvalue of delta under (0,-h; hN,0), h = k/2
};

const NewformSpec kNewforms[] = {
    {5, 4, "2^2 10^2", +1.0},
    {3, 6, "3^2 9^2", -1.0},
    {2, 8, "4^2 8^2", +1.0},
    {1, 12, "6^4", +1.0},
};

}  // namespace

TEST_SUITE("modforms") {

TEST_CASE("eta of tau itself: pentagonal head") {
    FracSeries e = eta_quotient(parse_eta_spec("1^1"), rat(14));
    CHECK(e.grid() == 24);
    CHECK(e.ord() == rat(1, 24));
    CHECK(e.coeff(rat(1, 24)) == 1);
    CHECK(e.coeff(rat(25, 24)) == -1);
    CHECK(e.coeff(rat(49, 24)) == -1);
    CHECK(e.coeff(rat(1, 24) + rat(5)) == 1);
    CHECK(e.coeff(rat(1, 24) + rat(7)) == 1);
    CHECK(e.coeff(rat(1, 24) + rat(12)) == -1);
    // everything else vanishes below q^13
    CHECK(e.term_count() == 6);
}

TEST_CASE("eta spec parsing") {
    auto f = parse_eta_spec("2^2 10^2");
    REQUIRE(f.size() == 2);
    CHECK(f[0].d == 2);
    CHECK(f[0].r == 2);
    CHECK(f[1].d == 10);
    CHECK(f[1].r == 2);
    CHECK(eta_spec_str(f) == "2^2 10^2");
    CHECK(parse_eta_spec("3^-2")[0].r == -2);
    CHECK_THROWS_AS(parse_eta_spec(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_eta_spec("0^2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_eta_spec("3^0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_eta_spec("abc"), std::invalid_argument);
}

TEST_CASE("eisenstein heads") {
    FracSeries e4 = eisenstein_e(4, 1, rat(8));
    CHECK(e4.coeff(0) == 1);
    CHECK(e4.coeff(1) == 240);
    CHECK(e4.coeff(2) == 2160);
    CHECK(e4.coeff(3) == 6720);
    FracSeries e6 = eisenstein_e(6, 1, rat(8));
    CHECK(e6.coeff(0) == 1);
    CHECK(e6.coeff(1) == -504);
    CHECK(e6.coeff(2) == -16632);
    CHECK(e6.coeff(3) == -122976);
    FracSeries e4d = eisenstein_e(4, 5, rat(11));
    CHECK(e4d.coeff(0) == 1);
    CHECK(e4d.coeff(1) == 0);
    CHECK(e4d.coeff(5) == 240);
    CHECK(e4d.coeff(10) == 2160);
    CHECK_THROWS_AS(eisenstein_e(8, 1, rat(5)), std::invalid_argument);
}

TEST_CASE("delta_{5,4}: two independent constructions agree") {
    FracSeries f = eta_quotient(parse_eta_spec("2^2 10^2"), rat(124));
    DeltaNk d = make_delta(5, 4, f);
    CHECK(d.N == 5);
    CHECK(d.k == 4);
    REQUIRE(d.F.has_value());
    CHECK(d.delta.grid() == 1);
    FracSeries direct = eta_quotient(parse_eta_spec("1^4 5^4"), rat(62));
    CHECK(agree(d.delta, direct));

    const long long head[] = {1, -4, 2, 8, -5, -8, 6, 0, -23, 20, 32, 16};
    for (long long n = 1; n <= 12; ++n) CHECK(d.delta.coeff(n) == rat(head[n - 1]));
}

TEST_CASE("delta_{1,12} is the discriminant form") {
    FracSeries f = eta_quotient(parse_eta_spec("6^4"), rat(200));
    DeltaNk d = make_delta(1, 12, f);
    FracSeries disc = eta_quotient(parse_eta_spec("1^24"), rat(33));
    CHECK(agree(d.delta, disc));
    CHECK(d.delta.coeff(1) == 1);
    CHECK(d.delta.coeff(2) == -24);
    CHECK(d.delta.coeff(3) == 252);
    CHECK(d.delta.coeff(4) == -1472);
}

TEST_CASE("newform support lies on n == 1 (mod k/2)") {
    for (const auto& nf : kNewforms) {
        FracSeries f = eta_quotient(parse_eta_spec(nf.spec), rat(301));
        long long h = nf.k / 2;
        for (const auto& [e, c] : f.items()) {
            REQUIRE(is_integer(e));
            long long n = static_cast<long long>(e.get_num().get_si());
            REQUIRE(n % h == 1 % h);
            REQUIRE(c != 0);
        }
        CHECK(f.coeff(1) == 1);
    }
}

TEST_CASE("ramanujan-serre derivation") {
    FracSeries f = eta_quotient(parse_eta_spec("2^2 10^2"), rat(40));
    DeltaNk d = make_delta(5, 4, f);
    // weight 4 = k: the distinguished form is annihilated
    FracSeries dd = ramanujan_serre(d, d.delta);
    CHECK(dd.known_zero());
    CHECK(dd.trunc_order() > rat(15));
    // weight 0: d(1) = -theta(delta)/delta, with constant term -1
    FracSeries done = ramanujan_serre(d, FracSeries::one(rat(18)));
    CHECK(done.coeff(0) == -1);
}

TEST_CASE("make_delta rejects bad input") {
    FracSeries bad_support = eta_quotient(parse_eta_spec("1^4 5^4"), rat(30));
    CHECK_THROWS_AS(make_delta(5, 4, bad_support), SupportViolation);
    FracSeries bad_lead = scale(eta_quotient(parse_eta_spec("2^2 10^2"), rat(30)), rat(2));
    CHECK_THROWS_AS(make_delta(5, 4, bad_lead), UnsupportedNormalization);
    FracSeries f = eta_quotient(parse_eta_spec("2^2 10^2"), rat(30));
    CHECK_THROWS_AS(make_delta(0, 4, f), std::invalid_argument);
    CHECK_THROWS_AS(make_delta(5, 3, f), std::invalid_argument);
}

TEST_CASE("series evaluation: eta at i") {
    FracSeries e = eta_quotient(parse_eta_spec("1^1"), rat(200));
    std::complex<double> v = eval_series(e, {0.0, 1.0});
    // eta(i) = Gamma(1/4) / (2 pi^{3/4})
    double expected = 0.7682254223260566;
    CHECK(std::abs(v.real() - expected) < 1e-12);
    CHECK(std::abs(v.imag()) < 1e-12);

    FracSeries short_e = eta_quotient(parse_eta_spec("1^1"), rat(10));
    CHECK_THROWS_AS(eval_series(short_e, {0.0, 0.01}), TailTooLarge);
    CHECK_THROWS_AS(eval_series(short_e, {0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("weight-4 Eisenstein transforms under the Fricke flip") {
    // E4 |_4 (0,-1; 5,0) = 25 E4(5 tau): not an eigenvalue statement, so check
    // the transformed values against the dilated series directly.
    FracSeries e4 = eisenstein_e(4, 1, rat(80));
    FracSeries e4_5 = eisenstein_e(4, 5, rat(80));
    GroupElement g{rat(0), rat(-1), rat(5), rat(0)};
    for (std::complex<double> tau : default_slash_samples()) {
        std::complex<double> gt = moebius(g, tau);
        std::complex<double> j = 5.0 * tau;  // c tau + d
        std::complex<double> lhs = 25.0 / (j * j * j * j) * eval_series(e4, gt);
        std::complex<double> rhs = 25.0 * eval_series(e4_5, tau);
        REQUIRE(std::abs(lhs - rhs) < 1e-8 * std::abs(rhs));
    }
}

TEST_CASE("slash eigenvalues of F and delta") {
    for (const auto& nf : kNewforms) {
        FracSeries f = eta_quotient(parse_eta_spec(nf.spec), rat(600));
        DeltaNk d = make_delta(nf.N, nf.k, f);
        long long h = nf.k / 2;

        GroupElement T{rat(1), rat(1), rat(0), rat(1)};
        GroupElement A{rat(1), rat(0), rat(nf.N), rat(1)};
        std::complex<double> lamT = std::polar(1.0, 2.0 * M_PI / static_cast<double>(h));
        SlashResult rt = slash_check(*d.F, 2, T);
        CHECK(std::abs(rt.lambda - lamT) < 1e-9);
        CHECK(rt.max_deviation < 1e-9);
        SlashResult ra = slash_check(*d.F, 2, A);
        CHECK(std::abs(ra.lambda - std::conj(lamT)) < 1e-9);
        CHECK(ra.max_deviation < 1e-9);

        GroupElement B{rat(0), rat(-h), rat(h * nf.N), rat(0)};
        SlashResult rb = slash_check(d.delta, nf.k, B);
        CHECK(std::abs(rb.lambda - nf.fricke) < 1e-9);
        CHECK(rb.max_deviation < 1e-9);
    }
}

TEST_CASE("group element operations") {
    GroupElement g{rat(2), rat(1), rat(3), rat(2)};
    CHECK(det(g) == 1);
    GroupElement gi = inverse(g);
    GroupElement id = mul(g, gi);
    CHECK(id.a == 1);
    CHECK(id.b == 0);
    CHECK(id.c == 0);
    CHECK(id.d == 1);
    std::complex<double> tau{0.3, 1.7};
    std::complex<double> t2 = moebius(gi, moebius(g, tau));
    CHECK(std::abs(t2 - tau) < 1e-12);
    CHECK(is_integral(g));
    CHECK(!is_integral(GroupElement{rat(1, 2), rat(0), rat(0), rat(2)}));
    CHECK(in_congruence_group(GroupElement{rat(1), rat(2), rat(10), rat(21)}, 10, 2));
    CHECK(!in_congruence_group(GroupElement{rat(1), rat(1), rat(10), rat(11)}, 10, 2));
    CHECK(!in_congruence_group(GroupElement{rat(1), rat(2), rat(5), rat(11)}, 10, 2));
}

TEST_CASE("group sample: membership and closure") {
    auto sample = group_sample_elements(5, 4);
    REQUIRE(sample.size() > 20);
    for (const auto& g : sample) {
        REQUIRE(det(g) == 1);
        REQUIRE(in_congruence_group(g, 10, 2));
        REQUIRE(g.c != 0);
    }
    std::mt19937 rng(445212);
    std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
    GroupElement T{rat(1), rat(1), rat(0), rat(1)};
    for (int iter = 0; iter < 100; ++iter) {
        const GroupElement& g = sample[pick(rng)];
        const GroupElement& h = sample[pick(rng)];
        GroupElement p = mul(g, h);
        REQUIRE(det(p) == 1);
        REQUIRE(in_congruence_group(p, 10, 2));
        GroupElement conj = mul(mul(T, g), inverse(T));
        REQUIRE(in_congruence_group(conj, 10, 2));
        REQUIRE(in_congruence_group(inverse(g), 10, 2));
    }
    auto sample76 = group_sample_elements(19, 4);
    CHECK(sample76.size() == 76);
    for (const auto& g : sample76) REQUIRE(in_congruence_group(g, 38, 2));
}

}  // TEST_SUITE
