// modparam: exact q-series identities for modular parametrizations, period
// lattices from Eichler integrals, and finiteness bounds.

#include <complex>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "modparam/bounds.hpp"
#include "modparam/errors.hpp"
#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"
#include "modparam/ode.hpp"
#include "modparam/periods.hpp"
#include "modparam/rational.hpp"
#include "modparam/selfcheck.hpp"

namespace {

using json = nlohmann::json;
using namespace modparam;

std::string real15(double x) {
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

std::string cplx15(cplx z) {
    std::ostringstream os;
    os << std::setprecision(15) << z.real();
    if (z.imag() >= 0)
        os << " + " << std::setprecision(15) << z.imag() << "i";
    else
        os << " - " << std::setprecision(15) << -z.imag() << "i";
    return os.str();
}

json series_json(const FracSeries& s) {
    json terms = json::array();
    for (const auto& [e, c] : s.items()) terms.push_back({rat_str(e), rat_str(c)});
    return json{{"grid", s.grid()}, {"trunc", rat_str(s.trunc_order())}, {"terms", terms}};
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- eta ----

struct EtaArgs {
    std::string spec;
    long long order = 40;
    std::string out;
    bool as_json = false;
};

int run_eta(const EtaArgs& a) {
    if (a.order < 1) throw std::invalid_argument("--order must be at least 1");
    FracSeries s = eta_quotient(parse_eta_spec(a.spec), rat(a.order + 1));
    if (!a.out.empty()) write_series_file(a.out, s);
    if (a.as_json) {
        emit(json{{"command", "eta"},
                  {"inputs", {{"spec", a.spec}, {"order", a.order}}},
                  {"results", series_json(s)},
                  {"residual_order", nullptr},
                  {"deviations", nullptr}});
    } else {
        std::cout << s.str(10000) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------- ode x3 ----

struct OdeArgs {
    std::string eta;      // eta-quotient expansion of Delta itself
    long long k = 4;
    long long N = 0;      // 0: infer from the largest eta dilation
    std::string shape;
    long long order = 60;
    std::string q_file;   // optional explicit Q
    std::string out;      // ode-solve: write the solution series here
    bool as_json = false;
};

long long infer_N(const std::vector<EtaFactor>& factors, long long flag) {
    if (flag > 0) return flag;
    long long n = 1;
    for (const auto& f : factors) n = std::max(n, f.d);
    return n;
}

DeltaNk delta_from_args(const OdeArgs& a, long long extra) {
    auto factors = parse_eta_spec(a.eta);
    long long N = infer_N(factors, a.N);
    FracSeries s = eta_quotient(factors, rat(a.order + extra));
    return wrap_delta(N, a.k, s);
}

int run_ode_verify(const OdeArgs& a) {
    if (a.order < 10) throw std::invalid_argument("--order must be at least 10");
    DeltaNk d = delta_from_args(a, 2);
    WeierstrassShape shape = parse_shape(a.shape, a.k);
    FracSeries Q = FracSeries::one(rat(1));
    std::string q_source;
    json q_info;
    if (!a.q_file.empty()) {
        Q = read_series_file(a.q_file);
        q_source = "file";
        q_info = a.q_file;
    } else if (a.k == 4) {
        auto sols = eisenstein_solutions(d, shape, d.N, a.order);
        std::optional<EisensteinSolution> unit;
        for (const auto& s : sols)
            if (s.alpha + s.beta == Rat(1)) unit = s;
        if (!unit) {
            std::cout << "no Eisenstein combination with constant term 1 solves this "
                         "equation\n";
            return 1;
        }
        Q = eisenstein_combination(unit->alpha, unit->beta, d.N, rat(a.order + 1));
        q_source = "eisenstein";
        q_info = json{{"alpha", rat_str(unit->alpha)}, {"beta", rat_str(unit->beta)}};
    } else {
        Q = solve_ode(d, shape, a.order);
        q_source = "solve";
        q_info = nullptr;
    }
    VerifyResult v = verify_ode(d, shape, Q, a.order);
    if (a.as_json) {
        json res{{"verified", v.verified}, {"q_source", q_source}, {"q", q_info}};
        if (v.first_failure) {
            res["first_failure"] = {{"exponent", rat_str(v.first_failure->first)},
                                    {"coefficient", rat_str(v.first_failure->second)}};
        }
        emit(json{{"command", "ode-verify"},
                  {"inputs",
                   {{"eta", a.eta}, {"k", a.k}, {"N", d.N}, {"shape", a.shape},
                    {"order", a.order}}},
                  {"results", res},
                  {"residual_order", rat_str(v.residual_order)},
                  {"deviations", nullptr}});
    } else if (v.verified) {
        std::cout << "residual 0 through q^" << a.order << "\n";
    } else {
        std::cout << "residual nonzero at q^" << rat_str(v.first_failure->first)
                  << ": coefficient " << rat_str(v.first_failure->second) << "\n";
    }
    return v.verified ? 0 : 1;
}

int run_ode_solve(const OdeArgs& a) {
    if (a.order < 1) throw std::invalid_argument("--order must be at least 1");
    DeltaNk d = delta_from_args(a, 2);
    WeierstrassShape shape = parse_shape(a.shape, a.k);
    FracSeries Q = solve_ode(d, shape, a.order);
    if (!a.out.empty()) write_series_file(a.out, Q);
    if (a.as_json) {
        emit(json{{"command", "ode-solve"},
                  {"inputs",
                   {{"eta", a.eta}, {"k", a.k}, {"N", d.N}, {"shape", a.shape},
                    {"order", a.order}}},
                  {"results", series_json(Q)},
                  {"residual_order", nullptr},
                  {"deviations", nullptr}});
    } else {
        std::cout << "Q = " << Q.str(10000) << "\n";
    }
    return 0;
}

int run_ode_fit(const OdeArgs& a) {
    if (a.q_file.empty()) throw std::invalid_argument("ode-fit needs --q-file");
    DeltaNk d = delta_from_args(a, 2);
    FracSeries Q = read_series_file(a.q_file);
    FitResult fr = fit_cubic(d, Q);
    auto names = standard_coeff_names(a.k);
    auto coeffs = shape_coeffs(fr.shape);
    if (a.as_json) {
        json cs;
        for (std::size_t i = 0; i < names.size(); ++i) cs[names[i]] = rat_str(coeffs[i]);
        emit(json{{"command", "ode-fit"},
                  {"inputs", {{"eta", a.eta}, {"k", a.k}, {"N", d.N}, {"q_file", a.q_file}}},
                  {"results",
                   {{"shape", shape_str(fr.shape)}, {"coefficients", cs},
                    {"verified_below", rat_str(fr.verified_below)}}},
                  {"residual_order", nullptr},
                  {"deviations", nullptr}});
    } else {
        std::cout << "k = " << a.k << "\n";
        for (std::size_t i = 0; i < names.size(); ++i)
            std::cout << names[i] << " = " << rat_str(coeffs[i]) << "\n";
        std::cout << "residual verified zero below q^" << rat_str(fr.verified_below) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ periods ----

struct PeriodsArgs {
    std::string curve;
    long long level = 76;
    double prec = 1e-12;
    long long nmax = 1200;
    std::string table;        // load coefficients instead of counting points
    std::string write_table;  // save the table used
    bool as_json = false;
};

int run_periods(const PeriodsArgs& a) {
    if (!(a.prec > 0)) throw std::invalid_argument("--prec must be positive");
    PipelineOptions opt;
    opt.nmax = a.nmax;
    opt.psi_tol = a.prec;
    PipelineResult pr;
    if (!a.table.empty()) {
        pr.table = read_coeff_table_file(a.table);
        if (pr.table.level != a.level)
            throw std::invalid_argument("table level " + std::to_string(pr.table.level) +
                                        " does not match --level " + std::to_string(a.level));
        auto elements = group_sample_elements(a.level / 4, 4, opt.c_max, opt.a_bound);
        for (const auto& g : elements)
            pr.periods.push_back(eichler_period(pr.table, g, opt.psi_tol));
        pr.lattice = lattice_from_periods(pr.periods, opt.lattice_tol);
        pr.invariants = lattice_invariants(pr.lattice);
    } else {
        RationalCubic curve =
            a.curve.empty() ? builtin_curve(a.level) : parse_curve(a.curve);
        pr = periods_pipeline(curve, a.level, opt);
    }
    if (!a.write_table.empty()) write_coeff_table_file(a.write_table, pr.table);
    if (a.as_json) {
        json seeds;
        for (const auto& [p, v] : pr.seeds) seeds[std::to_string(p)] = v;
        emit(json{{"command", "periods"},
                  {"inputs",
                   {{"curve", a.curve}, {"level", a.level}, {"prec", a.prec},
                    {"nmax", a.nmax}, {"table", a.table}}},
                  {"results",
                   {{"seeds", seeds},
                    {"omega1", {pr.lattice.w1.real(), pr.lattice.w1.imag()}},
                    {"omega2", {pr.lattice.w2.real(), pr.lattice.w2.imag()}},
                    {"g2", {pr.invariants.g2.real(), pr.invariants.g2.imag()}},
                    {"g3", {pr.invariants.g3.real(), pr.invariants.g3.imag()}},
                    {"tau", {pr.invariants.tau.real(), pr.invariants.tau.imag()}}}},
                  {"residual_order", nullptr},
                  {"deviations", {{"lattice_quality", pr.lattice.quality}}}});
    } else {
        std::cout << "level = " << a.level << "\n";
        for (const auto& [p, v] : pr.seeds)
            std::cout << "seed a_" << p << " = " << v << "\n";
        std::cout << "omega1 = " << cplx15(pr.lattice.w1) << "\n";
        std::cout << "omega2 = " << cplx15(pr.lattice.w2) << "\n";
        std::cout << "lattice quality = " << std::setprecision(3) << pr.lattice.quality
                  << "\n";
        std::cout << "g2 = " << cplx15(pr.invariants.g2) << "\n";
        std::cout << "g3 = " << cplx15(pr.invariants.g3) << "\n";
        std::cout << "tau = " << cplx15(pr.invariants.tau) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------- md-gcd ----

struct MdArgs {
    long long level = 76;
    long long bound = 5000;
    std::string table;
    std::string curve;
    bool as_json = false;
};

int run_md_gcd(const MdArgs& a) {
    CoeffTable t;
    if (!a.table.empty()) {
        t = read_coeff_table_file(a.table);
        if (t.level != a.level)
            throw std::invalid_argument("table level " + std::to_string(t.level) +
                                        " does not match --level " + std::to_string(a.level));
    } else {
        RationalCubic curve = a.curve.empty() ? builtin_curve(a.level) : parse_curve(a.curve);
        // Only good primes p == 1 (mod level) enter the gcd, so the
        // undetermined bad-prime signs can be fixed arbitrarily.
        std::map<long long, long long> seeds;
        long long rem = a.level;
        for (long long p = 2; p * p <= rem; p += (p == 2 ? 1 : 2))
            if (rem % p == 0) {
                long long e = 0;
                while (rem % p == 0) rem /= p, ++e;
                if (e == 1) seeds[p] = 1;
            }
        if (rem > 1) seeds[rem] = 1;
        t = build_coeff_table(curve, a.level, a.bound, seeds);
    }
    MdResult md = manin_drinfeld_gcd(t, a.bound);
    if (a.as_json) {
        json ws = json::array();
        for (const auto& w : md.witnesses)
            ws.push_back({{"p", w.p}, {"a_p", w.ap}, {"value", w.value}});
        emit(json{{"command", "md-gcd"},
                  {"inputs", {{"level", a.level}, {"bound", a.bound}, {"table", a.table}}},
                  {"results", {{"gcd", md.gcd}, {"witnesses", ws}}},
                  {"residual_order", nullptr},
                  {"deviations", nullptr}});
    } else {
        for (const auto& w : md.witnesses)
            std::cout << "p = " << w.p << ": a_p = " << w.ap << ", p + 1 - a_p = " << w.value
                      << "\n";
        std::cout << "gcd = " << md.gcd << "\n";
    }
    return 0;
}

// ------------------------------------------------------------- bounds ----

struct BoundsArgs {
    double M = 0;
    std::string mode = "paper";
    bool scan = false;
    std::string out;
    bool as_json = false;
};

int run_bounds(const BoundsArgs& a) {
    std::vector<BoundReport> rows;
    if (a.scan) {
        rows = finiteness_scan(a.mode);
    } else {
        if (!(a.M > 0)) throw std::invalid_argument("bounds needs --M or --scan");
        rows.push_back(finiteness_check(a.M, a.mode));
    }
    if (a.as_json) {
        json jr = json::array();
        for (const auto& r : rows) {
            json row{{"M", r.M},         {"lower", r.lower}, {"genus_upper", r.genus_upper},
                     {"rhs", r.rhs},     {"verdict", verdict_str(r)},
                     {"cusp_bound", r.cusp_bound_used == CuspBound::exact ? "exact"
                                                                          : "trivial_M"}};
            if (r.nu_inf >= 0) row["nu_inf"] = r.nu_inf;
            jr.push_back(row);
        }
        emit(json{{"command", "bounds"},
                  {"inputs", {{"M", a.M}, {"mode", a.mode}, {"scan", a.scan}}},
                  {"results", jr},
                  {"residual_order", nullptr},
                  {"deviations", nullptr}});
    } else if (!a.out.empty()) {
        std::ofstream os(a.out);
        if (!os) throw std::runtime_error("cannot open '" + a.out + "' for writing");
        write_bounds_csv(os, rows);
    } else {
        write_bounds_csv(std::cout, rows);
    }
    return 0;
}

// ---------------------------------------------------------- selfcheck ----

int run_selfcheck(std::optional<int> only, bool as_json) {
    if (as_json) {
        std::ostringstream buf;
        int failures = run_acceptance(buf, only);
        json lines = json::array();
        std::istringstream is(buf.str());
        std::string line;
        while (std::getline(is, line)) lines.push_back(line);
        emit(json{{"command", "selfcheck"},
                  {"inputs", {{"only", only ? json(*only) : json(nullptr)}}},
                  {"results", {{"failures", failures}, {"lines", lines}}},
                  {"residual_order", nullptr},
                  {"deviations", nullptr}});
        return failures == 0 ? 0 : 1;
    }
    int failures = run_acceptance(std::cout, only);
    std::cout << (failures == 0 ? "selfcheck: all criteria passed"
                                : "selfcheck: " + std::to_string(failures) +
                                      " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact modular-parametrization identities, period lattices, and "
                 "finiteness bounds"};
    app.require_subcommand(1);

    EtaArgs eta;
    auto* c_eta = app.add_subcommand("eta", "expand an eta quotient as a q-series");
    c_eta->add_option("--spec", eta.spec, "eta quotient, e.g. \"1^4 5^4\"")->required();
    c_eta->add_option("--order", eta.order, "expand through q^order");
    c_eta->add_option("--out", eta.out, "write the series to this file");
    c_eta->add_flag("--json", eta.as_json, "machine-readable output");

    OdeArgs ov, os_, of;
    auto add_ode_common = [](CLI::App* c, OdeArgs& a, bool need_shape) {
        c->add_option("--eta", a.eta, "eta-quotient expansion of Delta itself")->required();
        c->add_option("--k", a.k, "weight of Delta (4, 6, 8 or 12)")->required();
        c->add_option("--N", a.N, "level parameter (default: largest eta dilation)");
        auto* shape_opt =
            c->add_option("--shape", a.shape, "cubic coefficients, e.g. \"a2=0; a4=-64/3\"");
        if (need_shape) shape_opt->required();
        c->add_option("--order", a.order, "work through q^order");
        c->add_flag("--json", a.as_json, "machine-readable output");
    };
    auto* c_ov = app.add_subcommand("ode-verify",
                                    "verify the differential equation exactly; the "
                                    "solution is recovered from Eisenstein series (k = 4), "
                                    "solved coefficient-wise, or loaded via --q-file");
    add_ode_common(c_ov, ov, true);
    c_ov->add_option("--q-file", ov.q_file, "use this series as the solution");

    auto* c_os = app.add_subcommand("ode-solve", "solve the equation coefficient by "
                                                 "coefficient with constant term 1");
    add_ode_common(c_os, os_, true);
    c_os->add_option("--out", os_.out, "write the solution series to this file");

    auto* c_of = app.add_subcommand("ode-fit", "recover the cubic's coefficients from a "
                                               "known solution series");
    add_ode_common(c_of, of, false);
    c_of->add_option("--q-file", of.q_file, "solution series to fit against")->required();

    PeriodsArgs pa;
    auto* c_pe = app.add_subcommand("periods", "period lattice and invariants via Eichler "
                                               "integrals of the newform");
    c_pe->add_option("--curve", pa.curve, "curve as \"A=<rat>,B=<rat>\" for y^2 = x^3+Ax+B");
    c_pe->add_option("--level", pa.level, "newform level (default 76)");
    c_pe->add_option("--prec", pa.prec, "tail tolerance for the Eichler sums");
    c_pe->add_option("--nmax", pa.nmax, "coefficient table length");
    c_pe->add_option("--table", pa.table, "load coefficients from this table file");
    c_pe->add_option("--write-table", pa.write_table, "save the coefficient table used");
    c_pe->add_flag("--json", pa.as_json, "machine-readable output");

    MdArgs ma;
    auto* c_md = app.add_subcommand("md-gcd", "gcd of p + 1 - a_p over primes p == 1 "
                                              "(mod level): the torsion criterion");
    c_md->add_option("--level", ma.level, "level (default 76)");
    c_md->add_option("--bound", ma.bound, "scan primes up to this bound");
    c_md->add_option("--table", ma.table, "coefficient table file");
    c_md->add_option("--curve", ma.curve, "curve to count points on when no table given");
    c_md->add_flag("--json", ma.as_json, "machine-readable output");

    BoundsArgs ba;
    auto* c_bo = app.add_subcommand("bounds", "degree lower bounds vs genus/cusp upper "
                                              "bounds (finiteness argument)");
    c_bo->add_option("--M", ba.M, "level/conductor (real, e.g. 1e50, for paper mode)");
    c_bo->add_option("--mode", ba.mode, "paper or abramovich_remark");
    c_bo->add_flag("--scan", ba.scan, "emit the pinned 1000-point grid over (2^19, 2^21]");
    c_bo->add_option("--out", ba.out, "write the CSV here instead of stdout");
    c_bo->add_flag("--json", ba.as_json, "machine-readable output");

    std::optional<int> sc_only;
    int sc_only_raw = 0;
    bool sc_json = false;
    auto* c_sc = app.add_subcommand("selfcheck", "run the built-in acceptance checks");
    auto* only_opt = c_sc->add_option("--only", sc_only_raw, "run a single criterion (1-10)");
    c_sc->add_flag("--json", sc_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (*only_opt) sc_only = sc_only_raw;

    try {
        if (c_eta->parsed()) return run_eta(eta);
        if (c_ov->parsed()) return run_ode_verify(ov);
        if (c_os->parsed()) return run_ode_solve(os_);
        if (c_of->parsed()) return run_ode_fit(of);
        if (c_pe->parsed()) return run_periods(pa);
        if (c_md->parsed()) return run_md_gcd(ma);
        if (c_bo->parsed()) return run_bounds(ba);
        if (c_sc->parsed()) return run_selfcheck(sc_only, sc_json);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ModparamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
