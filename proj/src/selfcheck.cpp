#include "modparam/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "modparam/bounds.hpp"
#include "modparam/errors.hpp"
#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"
#include "modparam/ode.hpp"
#include "modparam/periods.hpp"

namespace modparam {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using Clock = std::chrono::steady_clock;

double secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 3) {
    std::ostringstream os;
    os << std::setprecision(prec) << x;
    return os.str();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Expensive shared state: the full level-76 pipeline and the long
// coefficient table, built once on first use.
struct Cache {
    std::optional<PipelineResult> pipe;
    std::optional<CoeffTable> t5k;
    double build_seconds = 0;
};

const PipelineResult& pipeline(Cache& c) {
    if (!c.pipe) {
        auto t0 = Clock::now();
        c.pipe = periods_pipeline(builtin_curve(76), 76, PipelineOptions{});
        c.t5k = build_coeff_table(builtin_curve(76), 76, 5000, c.pipe->seeds);
        c.build_seconds = secs(t0);
    }
    return *c.pipe;
}

const CoeffTable& table5k(Cache& c) {
    pipeline(c);
    return *c.t5k;
}

DeltaNk delta_5_4(const Rat& newform_trunc) {
    return make_delta(5, 4, eta_quotient(parse_eta_spec("2^2 10^2"), newform_trunc));
}

const WeierstrassShape& shape_sec1() {
    static const WeierstrassShape s =
        standard_shape(4, {rat(-89, 13), rat(-3500, 169), rat(-125000, 2197)});
    return s;
}

const WeierstrassShape& shape_sec4() {
    static const WeierstrassShape s = standard_shape(4, {rat(0), rat(-64, 3), rat(-1028, 27)});
    return s;
}

Outcome crit1(Cache&) {
    auto t0 = Clock::now();
    DeltaNk d = delta_5_4(rat(124));
    FracSeries Q = eisenstein_combination(rat(-1, 624), rat(625, 624), 5, rat(61));
    VerifyResult v = verify_ode(d, shape_sec1(), Q, 60);
    double el = secs(t0);
    if (!v.verified) {
        std::string at = v.first_failure ? rat_str(v.first_failure->first) : "?";
        return {false, "exact residual is nonzero at q^" + at};
    }
    if (el >= 10.0) return {false, "identity holds but took " + fmt(el) + " s (budget 10 s)"};
    return {true, "exact residual vanishes identically through q^60 in " + fmt(el) + " s"};
}

Outcome crit2(Cache&) {
    CoeffTable t = build_coeff_table(builtin_curve(76), 76, 40, {{19, -1}});
    DeltaNk d = make_delta(19, 4, table_series(t));
    FracSeries Q = solve_ode(d, shape_sec4(), 12);
    const Rat expect[8] = {rat(1),      rat(8, 3),   rat(8, 3),  rat(64, 3),
                           rat(232, 3), rat(112),    rat(256, 3), rat(512, 3)};
    for (long long n = 0; n < 8; ++n)
        if (Q.coeff(rat(n)) != expect[n])
            return {false, "coefficient of q^" + std::to_string(n) + " is " +
                               rat_str(Q.coeff(rat(n))) + ", expected " + rat_str(expect[n])};
    return {true, "solved series matches 1 + (1/3)(8q + 8q^2 + 64q^3 + 232q^4 + ...) "
                  "through q^7 exactly"};
}

Outcome crit3(Cache&) {
    // Level 76 branch.
    CoeffTable t = build_coeff_table(builtin_curve(76), 76, 60, {{19, -1}});
    DeltaNk d76 = make_delta(19, 4, table_series(t));
    FracSeries Q76 = solve_ode(d76, shape_sec4(), 20);
    FitResult f76 = fit_cubic(d76, Q76);
    std::vector<Rat> c76 = shape_coeffs(f76.shape);
    std::vector<Rat> want76 = {rat(0), rat(-64, 3), rat(-1028, 27)};
    if (c76 != want76)
        return {false, "level-76 fit gave (" + rat_str(c76[0]) + ", " + rat_str(c76[1]) +
                           ", " + rat_str(c76[2]) + ")"};
    // Level 20 branch.
    DeltaNk d20 = delta_5_4(rat(44));
    FracSeries Q20 = eisenstein_combination(rat(-1, 624), rat(625, 624), 5, rat(21));
    FitResult f20 = fit_cubic(d20, Q20);
    std::vector<Rat> c20 = shape_coeffs(f20.shape);
    std::vector<Rat> want20 = {rat(-89, 13), rat(-3500, 169), rat(-125000, 2197)};
    if (c20 != want20)
        return {false, "level-20 fit gave (" + rat_str(c20[0]) + ", " + rat_str(c20[1]) +
                           ", " + rat_str(c20[2]) + ")"};
    return {true, "fits recover (0, -64/3, -1028/27) and (-89/13, -3500/169, -125000/2197) "
                  "exactly"};
}

double lattice_area(cplx w1, cplx w2) { return std::abs(std::imag(std::conj(w1) * w2)); }

Outcome crit4(Cache& cache) {
    const PipelineResult& pr = pipeline(cache);
    double el = cache.build_seconds;
    cplx w1 = pr.lattice.w1, w2 = pr.lattice.w2;
    cplx r1(1.1104197465122, 0.0);
    cplx r2(0.5552098732561, 2.1752061725591);
    double d1 = lattice_distance(r1, w1, w2);
    double d2 = lattice_distance(r2, w1, w2);
    double area = lattice_area(w1, w2), area_ref = lattice_area(r1, r2);
    bool same = d1 < 1e-9 && d2 < 1e-9 && std::abs(area - area_ref) < 1e-6 * area_ref;
    std::ostringstream os;
    os << std::setprecision(13) << "w1 = " << w1.real() << ", w2 = " << w2.real() << " + "
       << w2.imag() << "i, reference offsets " << std::setprecision(2) << d1 << " / " << d2
       << ", fit quality " << pr.lattice.quality << ", " << fmt(el) << " s";
    if (!same) return {false, "lattice mismatch: " + os.str()};
    if (el >= 60.0) return {false, "lattice correct but took " + fmt(el) + " s (budget 60 s)"};
    return {true, os.str()};
}

Outcome crit5(Cache& cache) {
    const PipelineResult& pr = pipeline(cache);
    double g2ref = 256.0 / 3.0, g3ref = 4112.0 / 27.0;
    double e2 = std::abs(pr.invariants.g2 - g2ref) / g2ref;
    double e3 = std::abs(pr.invariants.g3 - g3ref) / g3ref;
    std::string detail = "g2 rel. err " + fmt(e2, 2) + ", g3 rel. err " + fmt(e3, 2) +
                         " against 256/3 and 4112/27";
    return {e2 < 1e-8 && e3 < 1e-8, detail};
}

Outcome crit6(Cache&) {
    auto models = integral_models(builtin_curve(76));
    long long a5 = curve_ap(models, 5);
    long long a7 = curve_ap(models, 7);
    if (a5 != -1 || a7 != -3)
        return {false, "a_5 = " + std::to_string(a5) + ", a_7 = " + std::to_string(a7) +
                           " (expected -1, -3)"};
    double worst = 0;
    long long checked = 0;
    for (long long p : primes_upto(5000)) {
        if (p == 2 || p == 19) continue;  // genuinely bad reduction
        long long ap = curve_ap(models, p);
        double margin = std::abs(static_cast<double>(ap)) / (2.0 * std::sqrt(static_cast<double>(p)));
        worst = std::max(worst, margin);
        if (ap * ap > 4 * p)
            return {false, "Hasse bound fails at p = " + std::to_string(p)};
        ++checked;
    }
    return {true, "a_5 = -1, a_7 = -3; Hasse bound holds at all " + std::to_string(checked) +
                      " good primes <= 5000 (max |a_p| / 2 sqrt p = " + fmt(worst, 3) + ")"};
}

Outcome crit7(Cache& cache) {
    MdResult md = manin_drinfeld_gcd(table5k(cache), 5000);
    std::string detail = "gcd over " + std::to_string(md.witnesses.size()) +
                         " primes p == 1 (mod 76), p <= 5000 is " + std::to_string(md.gcd);
    if (!md.witnesses.empty()) {
        const auto& w = md.witnesses.front();
        detail += " (first witness p = " + std::to_string(w.p) + ", p + 1 - a_p = " +
                  std::to_string(w.value) + ")";
    }
    return {md.gcd == 1, detail};
}

Outcome crit8(Cache&) {
    GenusCusps gc = genus_cusps_exact(76);
    return {gc.nu_inf == 6, "X_0(76): genus " + std::to_string(gc.genus) + ", " +
                                std::to_string(gc.nu_inf) + " cusps (expected 6 cusps)"};
}

Outcome crit9(Cache&) {
    BoundReport r50 = finiteness_check(1e50, "paper");
    BoundReport r76 = finiteness_check(76, "paper");
    bool paper_ok = r50.excluded && !r76.excluded;

    long long grid_bad = 0;
    std::optional<BoundReport> first_bad;
    for (const BoundReport& r : finiteness_scan("abramovich_remark"))
        if (!r.excluded) {
            ++grid_bad;
            if (!first_bad) first_bad = r;
        }
    long long hcn_total = 0, hcn_bad = 0;
    for (long long M : highly_composite_upto(2097152)) {
        if (M <= 524288) continue;
        ++hcn_total;
        BoundReport r = finiteness_check(static_cast<double>(M), "abramovich_remark");
        if (!r.excluded) {
            ++hcn_bad;
            if (!first_bad || M < first_bad->M) first_bad = r;
        }
    }
    std::ostringstream os;
    os << "paper mode: M = 10^50 " << (r50.excluded ? "excluded" : "NOT excluded")
       << ", M = 76 " << (r76.excluded ? "EXCLUDED" : "not excluded")
       << "; abramovich_remark over (2^19, 2^21]: " << grid_bad
       << " of 1000 grid levels and " << hcn_bad << " of " << hcn_total
       << " highly composite levels NOT excluded";
    if (first_bad) {
        os << " (e.g. M = " << static_cast<long long>(first_bad->M) << ": lower "
           << fmt(first_bad->lower, 6) << " < rhs " << fmt(first_bad->rhs, 6)
           << " with nu_inf = " << first_bad->nu_inf << ")";
    }
    bool pass = paper_ok && grid_bad == 0 && hcn_bad == 0;
    return {pass, os.str()};
}

FracSeries random_series(std::mt19937& gen) {
    static const long long grids[] = {1, 2, 3, 4, 6};
    long long w = grids[std::uniform_int_distribution<int>(0, 4)(gen)];
    long long t = std::uniform_int_distribution<long long>(3, 7)(gen);
    FracSeries s(w, rat(t));
    std::uniform_int_distribution<long long> ksel(0, w * t - 1);
    std::uniform_int_distribution<long long> num(-9, 9);
    std::uniform_int_distribution<long long> den(1, 9);
    int terms = std::uniform_int_distribution<int>(0, 6)(gen);
    for (int i = 0; i < terms; ++i) s.set(rat(ksel(gen), w), rat(num(gen), den(gen)));
    return s;
}

// Equality on the window both sides know about.
bool agree(const FracSeries& x, const FracSeries& y) {
    Rat t = std::min(x.trunc_order(), y.trunc_order());
    return truncate(x, t) == truncate(y, t);
}

Outcome crit10(Cache& cache) {
    std::mt19937 gen(20240517u);
    // Ring axioms.
    for (int i = 0; i < 200; ++i) {
        FracSeries a = random_series(gen), b = random_series(gen), c = random_series(gen);
        if (!agree(add(a, b), add(b, a)))
            return {false, "addition commutativity fails (case " + std::to_string(i) + ")"};
        if (!agree(add(add(a, b), c), add(a, add(b, c))))
            return {false, "addition associativity fails (case " + std::to_string(i) + ")"};
        if (!agree(mul(a, b), mul(b, a)))
            return {false, "multiplication commutativity fails (case " + std::to_string(i) + ")"};
        if (!agree(mul(mul(a, b), c), mul(a, mul(b, c))))
            return {false, "multiplication associativity fails (case " + std::to_string(i) + ")"};
        if (!agree(mul(a, add(b, c)), add(mul(a, b), mul(a, c))))
            return {false, "distributivity fails (case " + std::to_string(i) + ")"};
    }
    // Leibniz rule for theta = q d/dq.
    for (int i = 0; i < 100; ++i) {
        FracSeries a = random_series(gen), b = random_series(gen);
        if (!agree(theta(mul(a, b)), add(mul(theta(a), b), mul(a, theta(b)))))
            return {false, "Leibniz rule fails (case " + std::to_string(i) + ")"};
    }
    // Support of the shipped newforms: nonzero coefficients only at
    // n == 1 (mod k/2), checked to order 300.
    struct EtaLevel {
        long long N, k;
        const char* spec;
    };
    static const EtaLevel levels[] = {
        {5, 4, "2^2 10^2"}, {3, 6, "3^2 9^2"}, {2, 8, "4^2 8^2"}, {1, 12, "6^4"}};
    for (const auto& lv : levels) {
        FracSeries f = eta_quotient(parse_eta_spec(lv.spec), rat(301));
        long long h = lv.k / 2;
        for (const auto& [e, cf] : f.items()) {
            if (!is_integer(e))
                return {false, std::string(lv.spec) + " has a non-integer exponent " +
                                   rat_str(e)};
            mpz_class rem = e.get_num() % static_cast<long>(h);
            if (rem != 1)
                return {false, std::string(lv.spec) + " violates support at q^" + rat_str(e)};
        }
    }
    // Differential identity of the Weierstrass function on random points.
    const PipelineResult& pr = pipeline(cache);
    Weierstrass wp(pr.lattice, pr.invariants.g2, pr.invariants.g3);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    double worst_wp = 0;
    for (int i = 0; i < 20; ++i) {
        cplx z = frac(gen) * pr.lattice.w1 + frac(gen) * pr.lattice.w2;
        auto [P, Pp] = wp.at(z);
        cplx lhs = Pp * Pp;
        cplx rhs = 4.0 * P * P * P - pr.invariants.g2 * P - pr.invariants.g3;
        double rel = std::abs(lhs - rhs) / std::max(1.0, std::norm(P) * std::abs(P));
        worst_wp = std::max(worst_wp, rel);
    }
    if (!(worst_wp < 1e-8))
        return {false, "Weierstrass differential identity residual " + fmt(worst_wp, 3)};
    // Slash eigenvalues: Fricke on Delta within 1e-6 of +-1; T and A on the
    // half-integral root F within 1e-6 of e^{+-4 pi i / k}.
    double worst_slash = 0, worst_dev = 0;
    auto note = [&](const SlashResult& sr, cplx target) {
        worst_slash = std::max(worst_slash, std::abs(sr.lambda - target));
        worst_dev = std::max(worst_dev, sr.max_deviation);
    };
    auto samples = default_slash_samples();
    auto check_level = [&](const DeltaNk& d, double tol) {
        GroupElement B{rat(0), rat(-(d.k / 2)), rat((d.k / 2) * d.N), rat(0)};
        GroupElement T{rat(1), rat(1), rat(0), rat(1)};
        GroupElement A{rat(1), rat(0), rat(d.N), rat(1)};
        SlashResult sb = slash_check(d.delta, d.k, B, samples, tol);
        cplx fricke = sb.lambda.real() >= 0 ? cplx(1, 0) : cplx(-1, 0);
        note(sb, fricke);
        double ang = 4.0 * kPi / static_cast<double>(d.k);
        note(slash_check(*d.F, 2, T, samples, tol), std::polar(1.0, ang));
        note(slash_check(*d.F, 2, A, samples, tol), std::polar(1.0, -ang));
    };
    for (const auto& lv : levels)
        check_level(make_delta(lv.N, lv.k, eta_quotient(parse_eta_spec(lv.spec), rat(600))),
                    1e-9);
    check_level(make_delta(19, 4, table_series(table5k(cache))), 1e-7);
    if (!(worst_slash < 1e-6 && worst_dev < 1e-6))
        return {false, "slash eigenvalue error " + fmt(worst_slash, 3) +
                           ", sample deviation " + fmt(worst_dev, 3)};
    return {true, "ring axioms 200/200, Leibniz 100/100, support 4/4 newforms to q^300, "
                  "wp identity worst " + fmt(worst_wp, 2) + ", slash eigenvalue worst err " +
                  fmt(worst_slash, 2) + " (deviation " + fmt(worst_dev, 2) + ")"};
}

}  // namespace

int run_acceptance(std::ostream& os, std::optional<int> only) {
    if (only && (*only < 1 || *only > 10))
        throw std::invalid_argument("criterion number must be in 1..10");
    Cache cache;
    using Fn = Outcome (*)(Cache&);
    static const Fn fns[10] = {crit1, crit2, crit3, crit4, crit5,
                               crit6, crit7, crit8, crit9, crit10};
    int failures = 0;
    for (int n = 1; n <= 10; ++n) {
        if (only && *only != n) continue;
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = fns[n - 1](cache);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double el = secs(t0);
        os << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail
           << ") [" << fmt(el, 2) << " s]\n";
        if (!o.pass) ++failures;
    }
    return failures;
}

}  // namespace modparam
