// Python bindings: rationals cross the boundary as strings ("num/den") so
// the exact arithmetic never passes through floating point.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modparam/bounds.hpp"
#include "modparam/errors.hpp"
#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"
#include "modparam/ode.hpp"
#include "modparam/periods.hpp"
#include "modparam/rational.hpp"
#include "modparam/selfcheck.hpp"

namespace py = pybind11;
using namespace modparam;

namespace {

std::vector<std::pair<std::string, std::string>> series_terms(const FracSeries& s) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [e, c] : s.items()) out.emplace_back(rat_str(e), rat_str(c));
    return out;
}

FracSeries series_from_terms(long long grid, const std::string& trunc,
                             const std::vector<std::pair<std::string, std::string>>& terms) {
    FracSeries s(grid, parse_rat(trunc));
    for (const auto& [e, c] : terms) s.set(parse_rat(e), parse_rat(c));
    return s;
}

DeltaNk delta_from_spec(const std::string& eta, long long k, long long N, const Rat& trunc) {
    auto factors = parse_eta_spec(eta);
    if (N <= 0) {
        N = 1;
        for (const auto& f : factors) N = std::max(N, f.d);
    }
    return wrap_delta(N, k, eta_quotient(factors, trunc));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact q-series identities, period lattices, and finiteness bounds";

    py::register_exception<ModparamError>(m, "ModparamError");

    py::class_<FracSeries>(m, "Series")
        .def_static("from_terms", &series_from_terms, py::arg("grid"), py::arg("trunc"),
                    py::arg("terms"),
                    "Build a series from (exponent, coefficient) rational strings.")
        .def("grid", &FracSeries::grid)
        .def("trunc", [](const FracSeries& s) { return rat_str(s.trunc_order()); })
        .def("ord", [](const FracSeries& s) { return rat_str(s.ord()); })
        .def("coeff",
             [](const FracSeries& s, const std::string& e) {
                 return rat_str(s.coeff(parse_rat(e)));
             })
        .def("terms", &series_terms)
        .def("__str__", [](const FracSeries& s) { return s.str(); })
        .def("__eq__", [](const FracSeries& a, const FracSeries& b) { return a == b; })
        .def("add", [](const FracSeries& a, const FracSeries& b) { return add(a, b); })
        .def("sub", [](const FracSeries& a, const FracSeries& b) { return sub(a, b); })
        .def("mul", [](const FracSeries& a, const FracSeries& b) { return mul(a, b); })
        .def("invert", [](const FracSeries& a) { return invert(a); })
        .def("theta", [](const FracSeries& a) { return theta(a); })
        .def("pow", [](const FracSeries& a, long long n) { return pow(a, n); });

    m.def(
        "eta_quotient",
        [](const std::string& spec, long long order) {
            return eta_quotient(parse_eta_spec(spec), rat(order + 1));
        },
        py::arg("spec"), py::arg("order"), "Expand an eta quotient through q^order.");

    m.def(
        "eisenstein",
        [](int weight, long long dilation, long long order) {
            return eisenstein_e(weight, dilation, rat(order + 1));
        },
        py::arg("weight"), py::arg("dilation") = 1, py::arg("order") = 40);

    m.def(
        "ode_verify",
        [](const std::string& eta, long long k, const std::string& shape, long long order,
           long long N) {
            DeltaNk d = delta_from_spec(eta, k, N, rat(order + 2));
            WeierstrassShape sh = parse_shape(shape, k);
            py::dict out;
            FracSeries Q = FracSeries::one(rat(1));
            if (k == 4) {
                auto sols = eisenstein_solutions(d, sh, d.N, order);
                std::optional<EisensteinSolution> unit;
                for (const auto& s : sols)
                    if (s.alpha + s.beta == Rat(1)) unit = s;
                if (!unit) {
                    out["verified"] = false;
                    out["reason"] = "no Eisenstein combination with constant term 1";
                    return out;
                }
                Q = eisenstein_combination(unit->alpha, unit->beta, d.N, rat(order + 1));
                out["alpha"] = rat_str(unit->alpha);
                out["beta"] = rat_str(unit->beta);
            } else {
                Q = solve_ode(d, sh, order);
            }
            VerifyResult v = verify_ode(d, sh, Q, order);
            out["verified"] = v.verified;
            out["residual_order"] = rat_str(v.residual_order);
            return out;
        },
        py::arg("eta"), py::arg("k"), py::arg("shape"), py::arg("order") = 60,
        py::arg("N") = 0,
        "Verify the differential equation exactly; eta is the expansion of Delta itself.");

    m.def(
        "ode_solve",
        [](const std::string& eta, long long k, const std::string& shape, long long order,
           long long N) {
            DeltaNk d = delta_from_spec(eta, k, N, rat(order + 2));
            return solve_ode(d, parse_shape(shape, k), order);
        },
        py::arg("eta"), py::arg("k"), py::arg("shape"), py::arg("order") = 20,
        py::arg("N") = 0);

    m.def(
        "ode_fit",
        [](const std::string& eta, long long k, const FracSeries& Q, long long N) {
            Rat trunc = Q.trunc_order() + rat(2);
            long long t = to_ll(rat_ceil(trunc));
            DeltaNk d = delta_from_spec(eta, k, N, rat(t));
            FitResult fr = fit_cubic(d, Q);
            auto names = standard_coeff_names(k);
            auto coeffs = shape_coeffs(fr.shape);
            py::dict out;
            for (std::size_t i = 0; i < names.size(); ++i)
                out[names[i].c_str()] = rat_str(coeffs[i]);
            out["verified_below"] = rat_str(fr.verified_below);
            return out;
        },
        py::arg("eta"), py::arg("k"), py::arg("q"), py::arg("N") = 0);

    m.def(
        "periods",
        [](const std::string& curve, long long level, long long nmax) {
            PipelineOptions opt;
            opt.nmax = nmax;
            RationalCubic c = curve.empty() ? builtin_curve(level) : parse_curve(curve);
            PipelineResult pr = periods_pipeline(c, level, opt);
            py::dict out;
            py::dict seeds;
            for (const auto& [p, v] : pr.seeds) seeds[py::int_(p)] = v;
            out["seeds"] = seeds;
            out["omega1"] = pr.lattice.w1;
            out["omega2"] = pr.lattice.w2;
            out["quality"] = pr.lattice.quality;
            out["g2"] = pr.invariants.g2;
            out["g3"] = pr.invariants.g3;
            out["tau"] = pr.invariants.tau;
            return out;
        },
        py::arg("curve") = "", py::arg("level") = 76, py::arg("nmax") = 1200);

    m.def(
        "md_gcd",
        [](const std::string& curve, long long level, long long bound) {
            RationalCubic c = curve.empty() ? builtin_curve(level) : parse_curve(curve);
            std::map<long long, long long> seeds;
            long long rem = level;
            for (long long p = 2; p * p <= rem; p += (p == 2 ? 1 : 2))
                if (rem % p == 0) {
                    long long e = 0;
                    while (rem % p == 0) rem /= p, ++e;
                    if (e == 1) seeds[p] = 1;
                }
            if (rem > 1) seeds[rem] = 1;
            CoeffTable t = build_coeff_table(c, level, bound, seeds);
            MdResult md = manin_drinfeld_gcd(t, bound);
            std::vector<std::tuple<long long, long long, long long>> ws;
            for (const auto& w : md.witnesses) ws.emplace_back(w.p, w.ap, w.value);
            return py::make_tuple(md.gcd, ws);
        },
        py::arg("curve") = "", py::arg("level") = 76, py::arg("bound") = 5000,
        "Returns (gcd, [(p, a_p, p+1-a_p), ...]) over primes p == 1 (mod level).");

    m.def(
        "curve_ap",
        [](const std::string& curve, long long p) {
            return curve_ap(integral_models(parse_curve(curve)), p);
        },
        py::arg("curve"), py::arg("p"));

    m.def("watkins_lower", &watkins_lower, py::arg("M"));
    m.def("cwz_genus_upper", &cwz_genus_upper, py::arg("M"));
    m.def(
        "genus_cusps",
        [](long long M) {
            GenusCusps gc = genus_cusps_exact(M);
            return py::make_tuple(gc.genus, gc.nu_inf);
        },
        py::arg("M"));
    m.def(
        "finiteness_check",
        [](double M, const std::string& mode) {
            BoundReport r = finiteness_check(M, mode);
            py::dict out;
            out["M"] = r.M;
            out["lower"] = r.lower;
            out["genus_upper"] = r.genus_upper;
            out["rhs"] = r.rhs;
            out["verdict"] = verdict_str(r);
            if (r.nu_inf >= 0) out["nu_inf"] = r.nu_inf;
            return out;
        },
        py::arg("M"), py::arg("mode") = "paper");

    m.def(
        "selfcheck",
        [](std::optional<int> only) {
            std::ostringstream os;
            int failures = run_acceptance(os, only);
            return py::make_tuple(failures, os.str());
        },
        py::arg("only") = std::nullopt);
}
