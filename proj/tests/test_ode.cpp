#include <doctest.h>

#include <string>
#include <vector>

#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"
#include "modparam/ode.hpp"
#include "modparam/periods.hpp"

using namespace modparam;

namespace {

DeltaNk delta_5_4(long long newform_trunc) {
    FracSeries f = eta_quotient(parse_eta_spec("2^2 10^2"), rat(newform_trunc));
    return make_delta(5, 4, f);
}

DeltaNk delta_76(long long nmax) {
    CoeffTable t = build_coeff_table(builtin_curve(76), 76, nmax, {{19, -1}});
    return make_delta(19, 4, table_series(t));
}

const char* kShape5 = "a2=-89/13; a4=-3500/169; a6=-125000/2197";
const char* kShape76 = "a2=0; a4=-64/3; a6=-1028/27";

}  // namespace

TEST_SUITE("ode") {

TEST_CASE("eisenstein combination head") {
    FracSeries q5 = eisenstein_combination(rat(-1, 624), rat(625, 624), 5, rat(10));
    const Rat head[] = {rat(1),        rat(-5, 13),   rat(-45, 13), rat(-140, 13), rat(-365, 13),
                        rat(2495, 13), rat(-1260, 13), rat(-1720, 13), rat(-225)};
    for (long long n = 0; n <= 8; ++n) CHECK(q5.coeff(n) == head[n]);
}

TEST_CASE("eisenstein solution scan finds exactly two lines") {
    DeltaNk d = delta_5_4(140);
    WeierstrassShape shape = parse_shape(kShape5, 4);
    auto sols = eisenstein_solutions(d, shape, 5);
    REQUIRE(sols.size() == 2);
    CHECK(sols[0].alpha == rat(-1, 624));
    CHECK(sols[0].beta == rat(625, 624));
    CHECK(sols[1].alpha == rat(25, 624));
    CHECK(sols[1].beta == rat(-25, 624));
    CHECK(sols[0].alpha + sols[0].beta == 1);
    CHECK(sols[1].alpha + sols[1].beta == 0);
}

TEST_CASE("recursive solution matches the closed form") {
    DeltaNk d = delta_5_4(70);
    WeierstrassShape shape = parse_shape(kShape5, 4);
    FracSeries q = solve_ode(d, shape, 30);
    FracSeries closed = eisenstein_combination(rat(-1, 624), rat(625, 624), 5, rat(31));
    CHECK(q == closed);
}

TEST_CASE("verification through a fixed order") {
    DeltaNk d = delta_5_4(124);  // delta known below q^62
    WeierstrassShape shape = parse_shape(kShape5, 4);
    FracSeries q = eisenstein_combination(rat(-1, 624), rat(625, 624), 5, rat(61));
    VerifyResult v = verify_ode(d, shape, q, 60);
    CHECK(v.verified);
    CHECK(v.residual.known_zero());
    CHECK(v.residual_order == rat(61));
    CHECK(!v.first_failure.has_value());
    // the residual is only known below q^61, so q^61 cannot be certified
    CHECK_THROWS_AS(verify_ode(d, shape, q, 61), TruncationTooShort);
}

TEST_CASE("solution is unique: longer run extends the shorter one") {
    DeltaNk d = delta_5_4(130);
    WeierstrassShape shape = parse_shape(kShape5, 4);
    FracSeries q30 = solve_ode(d, shape, 30);
    FracSeries q60 = solve_ode(d, shape, 60);
    CHECK(truncate(q60, rat(31)) == q30);
}

TEST_CASE("normalization of the constant term") {
    DeltaNk d = delta_5_4(40);
    WeierstrassShape shape = parse_shape(kShape5, 4);
    CHECK_THROWS_AS(solve_ode(d, shape, 10, rat(0)), SingularSystem);
    CHECK_THROWS_AS(solve_ode(d, shape, 10, rat(2)), UnsupportedNormalization);
}

TEST_CASE("weight-4 series from the point-count table") {
    DeltaNk d = delta_76(40);
    WeierstrassShape shape = parse_shape(kShape76, 4);
    FracSeries q = solve_ode(d, shape, 12);
    const Rat head[] = {rat(1),      rat(8, 3),    rat(8, 3),   rat(64, 3),  rat(232, 3),
                        rat(112),    rat(256, 3),  rat(512, 3), rat(440),    rat(1736, 3),
                        rat(624),    rat(2624, 3), rat(3968, 3)};
    for (long long n = 0; n <= 12; ++n) CHECK(q.coeff(n) == head[n]);
}

TEST_CASE("fit recovers the cubic exactly") {
    DeltaNk d5 = delta_5_4(70);
    FracSeries q5 = eisenstein_combination(rat(-1, 624), rat(625, 624), 5, rat(31));
    FitResult f5 = fit_cubic(d5, q5);
    CHECK(f5.shape.k == 4);
    auto c5 = shape_coeffs(f5.shape);
    REQUIRE(c5.size() == 3);
    CHECK(c5[0] == rat(-89, 13));
    CHECK(c5[1] == rat(-3500, 169));
    CHECK(c5[2] == rat(-125000, 2197));
    CHECK(f5.verified_below >= rat(30));

    DeltaNk d76 = delta_76(40);
    FracSeries q76 = solve_ode(d76, parse_shape(kShape76, 4), 15);
    FitResult f76 = fit_cubic(d76, q76);
    auto c76 = shape_coeffs(f76.shape);
    REQUIRE(c76.size() == 3);
    CHECK(c76[0] == 0);
    CHECK(c76[1] == rat(-64, 3));
    CHECK(c76[2] == rat(-1028, 27));
}

TEST_CASE("negative control: delta itself is not a solution") {
    DeltaNk d = delta_76(40);
    WeierstrassShape shape = parse_shape(kShape76, 4);
    VerifyResult v = verify_ode(d, shape, d.delta);
    CHECK(!v.verified);
    REQUIRE(v.first_failure.has_value());
    CHECK(v.first_failure->first == rat(3));
    CHECK(v.first_failure->second == rat(1577, 27));
}

TEST_CASE("shape parsing") {
    WeierstrassShape s = parse_shape("k=4; a2=-89/13; a4=-3500/169; a6=-125000/2197");
    CHECK(s.k == 4);
    auto c = shape_coeffs(s);
    CHECK(c[0] == rat(-89, 13));
    CHECK(c[1] == rat(-3500, 169));
    CHECK(c[2] == rat(-125000, 2197));
    WeierstrassShape back = parse_shape(shape_str(s));
    CHECK(shape_coeffs(back) == c);
    CHECK(back.k == 4);

    WeierstrassShape partial = parse_shape("a4=5", 4);
    auto pc = shape_coeffs(partial);
    CHECK(pc[0] == 0);
    CHECK(pc[1] == 5);
    CHECK(pc[2] == 0);

    CHECK(parse_shape("b6=-3", 6).k == 6);
    CHECK(parse_shape("c4=9", 8).k == 8);
    CHECK(parse_shape("d6=1/2", 12).k == 12);

    CHECK_THROWS_AS(parse_shape("a2=1; z9=2", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_shape("k=4; a2=1", 6), std::invalid_argument);
    CHECK_THROWS_AS(parse_shape("a2=1; b6=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_shape("a2=1; a2=2", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_shape("a2=0.5", 4), std::invalid_argument);
}

TEST_CASE("shape construction rules") {
    CHECK_THROWS_AS(make_shape(4, {{rat(1), 2, 1}}), std::invalid_argument);  // weight 10
    CHECK_THROWS_AS(make_shape(4, {{rat(1), 3, 0}}), std::invalid_argument);  // cubic implicit
    CHECK_THROWS_AS(make_shape(3, {}), std::invalid_argument);                // odd weight
    CHECK_THROWS_AS(
        make_shape(4, {{rat(1), 1, 4}, {rat(2), 1, 4}}), std::invalid_argument);  // duplicate
    WeierstrassShape s = make_shape(4, {{rat(5), 1, 4}});
    CHECK(s.terms.size() == 2);  // monic cubic added implicitly

    CHECK(standard_coeff_names(4) == std::vector<std::string>{"a2", "a4", "a6"});
    CHECK(standard_coeff_names(6) == std::vector<std::string>{"b6"});
    CHECK(standard_coeff_names(8) == std::vector<std::string>{"c4"});
    CHECK(standard_coeff_names(12) == std::vector<std::string>{"d6"});
    CHECK_THROWS_AS(standard_shape(10, {rat(1)}), std::invalid_argument);
    CHECK_THROWS_AS(standard_shape(4, {rat(1)}), std::invalid_argument);  // wants 3 coeffs
}

TEST_CASE("solve-fit round trip at the higher weights") {
    struct Case {
        long long N, k;
        const char* spec;
        Rat coeff;
    };
    const Case cases[] = {
        {3, 6, "3^2 9^2", rat(-27)},
        {2, 8, "4^2 8^2", rat(1, 7)},
        {1, 12, "6^4", rat(-5)},
    };
    for (const auto& cs : cases) {
        long long h = cs.k / 2;
        FracSeries f = eta_quotient(parse_eta_spec(cs.spec), rat(h * 25));
        DeltaNk d = make_delta(cs.N, cs.k, f);
        WeierstrassShape shape = standard_shape(cs.k, {cs.coeff});
        FracSeries q = solve_ode(d, shape, 18);
        VerifyResult v = verify_ode(d, shape, q, 18);
        CHECK(v.verified);
        FitResult fit = fit_cubic(d, q);
        CHECK(fit.shape.k == cs.k);
        auto c = shape_coeffs(fit.shape);
        REQUIRE(c.size() == 1);
        CHECK(c[0] == cs.coeff);
    }
}

}  // TEST_SUITE
