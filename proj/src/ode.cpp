#include "modparam/ode.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "modparam/errors.hpp"

namespace modparam {

namespace {

const std::map<long long, std::vector<std::pair<std::string, std::pair<long long, long long>>>>&
standard_terms() {
    static const std::map<long long,
                          std::vector<std::pair<std::string, std::pair<long long, long long>>>>
        table = {
            {4, {{"a2", {2, 2}}, {"a4", {1, 4}}, {"a6", {0, 6}}}},
            {6, {{"b6", {0, 6}}}},
            {8, {{"c4", {1, 4}}}},
            {12, {{"d6", {0, 6}}}},
        };
    return table;
}

FracSeries square(const FracSeries& a) { return mul(a, a); }

void trim(std::string& s) {
    auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
}

// --- small dense polynomials over Q in one variable -------------------------

using Poly = std::vector<Rat>;  // p[i] multiplies x^i

void poly_normalize(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

bool poly_zero(const Poly& p) { return p.empty(); }

Poly poly_mod(Poly a, const Poly& b) {
    poly_normalize(a);
    while (a.size() >= b.size()) {
        Rat f = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        poly_normalize(a);
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b) {
    poly_normalize(a);
    poly_normalize(b);
    while (!poly_zero(b)) {
        Poly r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

Rat poly_eval(const Poly& p, const Rat& x) {
    Rat acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Rational roots of a polynomial of degree <= 2 (after removing the trivial
// root 0); throws for higher degree, which the callers never produce.
std::vector<Rat> poly_rational_roots(Poly p) {
    poly_normalize(p);
    std::vector<Rat> roots;
    if (p.size() <= 1) return roots;  // constant: no roots to report
    std::size_t shift = 0;
    while (shift < p.size() && p[shift] == 0) ++shift;
    if (shift > 0) {
        roots.push_back(Rat(0));
        p.erase(p.begin(), p.begin() + static_cast<long>(shift));
    }
    if (p.size() == 1) return roots;
    if (p.size() == 2) {
        roots.push_back(-p[0] / p[1]);
    } else if (p.size() == 3) {
        Rat disc = p[1] * p[1] - 4 * p[2] * p[0];
        if (disc >= 0) {
            mpz_class n = disc.get_num(), d = disc.get_den(), rn, rd;
            if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
                mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
                mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
                Rat s(rn, rd);
                s.canonicalize();
                roots.push_back((-p[1] + s) / (2 * p[2]));
                roots.push_back((-p[1] - s) / (2 * p[2]));
            }
        }
    } else {
        throw SingularSystem(
            "cannot extract rational roots of an invariant polynomial of degree " +
            std::to_string(p.size() - 1));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// Interpolates the degree <= 3 polynomial through (0,v0)..(3,v3).
Poly lagrange_cubic(const std::array<Rat, 4>& v) {
    // Explicit Newton form on nodes 0,1,2,3.
    Rat d0 = v[0];
    Rat d1 = v[1] - v[0];
    Rat d2 = (v[2] - 2 * v[1] + v[0]) / 2;
    Rat d3 = (v[3] - 3 * v[2] + 3 * v[1] - v[0]) / 6;
    // p(x) = d0 + d1 x + d2 x(x-1) + d3 x(x-1)(x-2)
    Poly p = {d0, d1 - d2 + 2 * d3, d2 - 3 * d3, d3};
    poly_normalize(p);
    return p;
}

}  // namespace

WeierstrassShape make_shape(long long k, const std::vector<ShapeTerm>& lower_terms) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("shape weight k must be even >= 2");
    WeierstrassShape s;
    s.k = k;
    s.terms.push_back(ShapeTerm{Rat(1), 3, 0});
    for (const auto& t : lower_terms) {
        if (t.deg_q < 0 || t.deg_f < 0)
            throw std::invalid_argument("shape term degrees must be nonnegative");
        if (t.deg_q == 3 && t.deg_f == 0)
            throw std::invalid_argument("the monic cubic term is implicit");
        if (4 * t.deg_q + 2 * t.deg_f != 12)
            throw std::invalid_argument("shape term must satisfy 4 deg_q + 2 deg_f = 12");
        for (const auto& u : s.terms)
            if (u.deg_q == t.deg_q && u.deg_f == t.deg_f)
                throw std::invalid_argument("duplicate shape term");
        if (t.coeff != 0) s.terms.push_back(t);
    }
    return s;
}

std::vector<std::string> standard_coeff_names(long long k) {
    auto it = standard_terms().find(k);
    if (it == standard_terms().end())
        throw std::invalid_argument("no standard shape for k = " + std::to_string(k) +
                                    " (supported: 4, 6, 8, 12)");
    std::vector<std::string> names;
    for (const auto& [name, degs] : it->second) names.push_back(name);
    return names;
}

WeierstrassShape standard_shape(long long k, const std::vector<Rat>& coeffs) {
    auto it = standard_terms().find(k);
    if (it == standard_terms().end())
        throw std::invalid_argument("no standard shape for k = " + std::to_string(k) +
                                    " (supported: 4, 6, 8, 12)");
    if (coeffs.size() != it->second.size())
        throw std::invalid_argument("standard shape for k = " + std::to_string(k) + " takes " +
                                    std::to_string(it->second.size()) + " coefficients");
    std::vector<ShapeTerm> lower;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        lower.push_back(ShapeTerm{coeffs[i], it->second[i].second.first,
                                  it->second[i].second.second});
    return make_shape(k, lower);
}

WeierstrassShape parse_shape(const std::string& text, std::optional<long long> k_hint) {
    std::optional<long long> k;
    std::map<std::string, Rat> vals;
    std::istringstream is(text);
    std::string piece;
    while (std::getline(is, piece, ';')) {
        trim(piece);
        if (piece.empty()) continue;
        std::size_t eq = piece.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("shape entries must look like 'name=value': '" +
                                        piece + "'");
        std::string name = piece.substr(0, eq), val = piece.substr(eq + 1);
        trim(name);
        trim(val);
        if (name == "k") {
            try {
                std::size_t used = 0;
                k = std::stoll(val, &used);
                if (used != val.size()) throw std::invalid_argument("bad");
            } catch (const std::exception&) {
                throw std::invalid_argument("malformed k in shape: '" + val + "'");
            }
        } else {
            if (vals.count(name))
                throw std::invalid_argument("duplicate shape coefficient '" + name + "'");
            vals[name] = parse_rat(val);
        }
    }
    if (k && k_hint && *k != *k_hint)
        throw std::invalid_argument("shape string says k=" + std::to_string(*k) +
                                    " but k=" + std::to_string(*k_hint) + " was requested");
    if (!k) k = k_hint;
    if (!k) {
        // Infer k from the coefficient names when unambiguous.
        for (const auto& [kk, entries] : standard_terms())
            for (const auto& [name, degs] : entries)
                if (vals.count(name)) {
                    if (k && *k != kk)
                        throw std::invalid_argument("shape mixes coefficients of different k");
                    k = kk;
                }
        if (!k) throw std::invalid_argument("cannot infer k from shape '" + text + "'");
    }
    auto names = standard_coeff_names(*k);
    std::vector<Rat> coeffs;
    for (const auto& name : names) {
        auto it = vals.find(name);
        coeffs.push_back(it == vals.end() ? Rat(0) : it->second);
        if (it != vals.end()) vals.erase(it);
    }
    if (!vals.empty())
        throw std::invalid_argument("shape coefficient '" + vals.begin()->first +
                                    "' does not belong to k = " + std::to_string(*k));
    return standard_shape(*k, coeffs);
}

std::string shape_str(const WeierstrassShape& s) {
    std::ostringstream os;
    os << "k=" << s.k;
    auto names = standard_coeff_names(s.k);
    auto coeffs = shape_coeffs(s);
    for (std::size_t i = 0; i < names.size(); ++i)
        os << "; " << names[i] << "=" << rat_str(coeffs[i]);
    return os.str();
}

std::vector<Rat> shape_coeffs(const WeierstrassShape& s) {
    auto it = standard_terms().find(s.k);
    if (it == standard_terms().end())
        throw std::invalid_argument("no standard shape for k = " + std::to_string(s.k));
    std::vector<Rat> out;
    for (const auto& [name, degs] : it->second) {
        Rat c(0);
        for (const auto& t : s.terms)
            if (t.deg_q == degs.first && t.deg_f == degs.second) c = t.coeff;
        out.push_back(c);
    }
    // Every sub-cubic term must be accounted for by the standard basis.
    for (const auto& t : s.terms) {
        if (t.deg_q == 3 && t.deg_f == 0) continue;
        bool found = false;
        for (const auto& [name, degs] : it->second)
            if (t.deg_q == degs.first && t.deg_f == degs.second) found = true;
        if (!found)
            throw std::invalid_argument("shape has a term outside the standard basis for k = " +
                                        std::to_string(s.k));
    }
    return out;
}

FracSeries shape_rhs(const DeltaNk& d, const WeierstrassShape& shape, const FracSeries& Q) {
    if (shape.k != d.k)
        throw std::invalid_argument("shape weight does not match the delta structure");
    long long h = d.k / 2;
    std::optional<FracSeries> rhs;
    for (const auto& t : shape.terms) {
        FracSeries part = pow(Q, t.deg_q);
        if (t.deg_f != 0) {
            if (t.deg_f % h == 0) {
                part = mul(part, pow(d.delta, t.deg_f / h));
            } else if (d.F) {
                part = mul(part, pow(*d.F, t.deg_f));
            } else {
                throw UnsupportedNormalization(
                    "shape term F^" + std::to_string(t.deg_f) +
                    " needs the k/2-th root of delta, which this delta object lacks");
            }
        }
        part = scale(part, t.coeff);
        rhs = rhs ? add(*rhs, part) : part;
    }
    return *rhs;
}

namespace {

// Knowledge of delta beyond Q's window cannot reach the residual: every
// truncation minimum below is governed by trunc(Q) once trunc(delta) exceeds
// trunc(Q) + 2 and ord(Q) >= 0. Trimming first keeps the result identical
// (same terms, same truncation order) and bounds the work by Q's length
// instead of delta's.
DeltaNk trim_delta_to(const DeltaNk& d, const FracSeries& Q) {
    Rat need = Q.trunc_order() + 2;
    if (Q.ord() < 0 || d.delta.trunc_order() <= need) return d;
    std::optional<FracSeries> F;
    if (d.F) F = d.F->trunc_order() > need ? truncate(*d.F, need) : *d.F;
    return DeltaNk(d.N, d.k, std::move(F), truncate(d.delta, need));
}

}  // namespace

FracSeries ode_residual(const DeltaNk& d, const WeierstrassShape& shape, const FracSeries& Q) {
    DeltaNk dd = trim_delta_to(d, Q);
    return sub(square(ramanujan_serre(dd, Q)), shape_rhs(dd, shape, Q));
}

VerifyResult verify_ode(const DeltaNk& d, const WeierstrassShape& shape, const FracSeries& Q,
                        std::optional<long long> through_order) {
    VerifyResult out{ode_residual(d, shape, Q), Rat(0), false, std::nullopt};
    out.residual_order = out.residual.ord();
    if (!out.residual.known_zero()) {
        Rat e = out.residual.ord();
        out.first_failure = std::make_pair(e, out.residual.coeff(e));
    }
    if (through_order) {
        if (out.residual.trunc_order() <= rat(*through_order))
            throw TruncationTooShort(
                "residual only known below exponent " + rat_str(out.residual.trunc_order()) +
                ", cannot certify through q^" + std::to_string(*through_order) +
                "; supply longer input series");
        out.verified = out.residual_order > rat(*through_order);
    } else {
        out.verified = out.residual.known_zero();
    }
    return out;
}

FracSeries solve_ode(const DeltaNk& d, const WeierstrassShape& shape, long long order,
                     const Rat& c0) {
    if (order < 0) throw std::invalid_argument("solve order must be nonnegative");
    long long h = d.k / 2;
    for (const auto& t : shape.terms)
        if (t.deg_f % h != 0)
            throw UnsupportedNormalization(
                "coefficient recursion needs every shape term expressible in integer powers "
                "of delta");
    if (c0 == 0)
        throw SingularSystem(
            "the c0 = 0 branch is singular: the residual's linearization in c_M has slope 0 "
            "at every order, so no coefficient is determined");
    if (c0 != 1)
        throw UnsupportedNormalization(
            "constant term must be 0 or 1 (the residual's constant term is c0^2 (1 - c0)); "
            "got c0 = " + rat_str(c0));
    FracSeries Q(1, rat(order + 1));
    Q.set(rat(0), c0);
    for (long long M = 1; M <= order; ++M) {
        FracSeries R = ode_residual(d, shape, truncate(Q, rat(M + 1)));
        if (R.trunc_order() <= rat(M))
            throw TruncationTooShort("delta series too short to determine coefficient c_" +
                                     std::to_string(M) + " (residual known below " +
                                     rat_str(R.trunc_order()) + ")");
        if (R.ord() < rat(M))
            throw SingularSystem("recursion failed to cancel the residual at order " +
                                 rat_str(R.ord()));
        Rat cm = R.coeff(rat(M)) / rat(h * M + 1);
        if (cm != 0) Q.set(rat(M), cm);
    }
    FracSeries final_residual = ode_residual(d, shape, Q);
    if (final_residual.ord() <= rat(order))
        throw VerificationFailure("solved series fails its own equation at order " +
                                  rat_str(final_residual.ord()));
    return Q;
}

FitResult fit_cubic(const DeltaNk& d, const FracSeries& Q) {
    auto it = standard_terms().find(d.k);
    if (it == standard_terms().end())
        throw std::invalid_argument("no standard shape to fit for k = " + std::to_string(d.k));
    long long h = d.k / 2;
    FracSeries dq = ramanujan_serre(d, Q);
    FracSeries lhs = sub(square(dq), pow(Q, 3));
    struct Basis {
        std::string name;
        long long deg_q, deg_f;
        FracSeries series;
        Rat ord;
    };
    std::vector<Basis> basis;
    for (const auto& [name, degs] : it->second) {
        FracSeries b = mul(pow(Q, degs.first), pow(d.delta, degs.second / h));
        Rat o = b.ord();
        basis.push_back(Basis{name, degs.first, degs.second, std::move(b), o});
    }
    std::sort(basis.begin(), basis.end(), [](const Basis& x, const Basis& y) {
        return x.ord < y.ord;
    });
    for (std::size_t i = 0; i + 1 < basis.size(); ++i)
        if (basis[i].ord == basis[i + 1].ord)
            throw SingularSystem("basis series " + basis[i].name + " and " + basis[i + 1].name +
                                 " share leading order " + rat_str(basis[i].ord));
    Rat last_ord = basis.back().ord;
    if (lhs.trunc_order() <= last_ord)
        throw TruncationTooShort("need the left-hand side through exponent " +
                                 rat_str(last_ord) + " but it is only known below " +
                                 rat_str(lhs.trunc_order()));
    std::map<std::string, Rat> fitted;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].series.known_zero())
            throw SingularSystem("basis series " + basis[i].name + " vanishes identically");
        Rat pivot = basis[i].series.coeff(basis[i].ord);
        Rat target = lhs.coeff(basis[i].ord);
        for (std::size_t j = 0; j < i; ++j)
            target -= fitted[basis[j].name] * basis[j].series.coeff(basis[i].ord);
        fitted[basis[i].name] = target / pivot;
    }
    FracSeries residual = lhs;
    for (const auto& b : basis) residual = sub(residual, scale(b.series, fitted[b.name]));
    if (!residual.known_zero()) {
        Rat e = residual.ord();
        throw VerificationFailure("fitted cubic fails at order " + rat_str(e) +
                                  " with residual coefficient " + rat_str(residual.coeff(e)));
    }
    std::vector<Rat> coeffs;
    for (const auto& [name, degs] : it->second) coeffs.push_back(fitted[name]);
    return FitResult{standard_shape(d.k, coeffs), residual.trunc_order()};
}

FracSeries eisenstein_combination(const Rat& alpha, const Rat& beta, long long dilation,
                                  const Rat& trunc) {
    return add(scale(eisenstein_e(4, 1, trunc), alpha),
               scale(eisenstein_e(4, dilation, trunc), beta));
}

std::vector<EisensteinSolution> eisenstein_solutions(const DeltaNk& d,
                                                     const WeierstrassShape& shape,
                                                     long long dilation,
                                                     long long verify_order) {
    if (d.k != 4 || shape.k != 4)
        throw std::invalid_argument("the Eisenstein ansatz is a weight-4 construction");
    if (verify_order < 4) throw std::invalid_argument("verify_order too small");
    const long long probe_order = 12;
    Rat probe_trunc = rat(probe_order + 3);
    if (d.delta.trunc_order() < probe_trunc + 2)
        throw TruncationTooShort("delta series too short for the Eisenstein solution scan");
    std::vector<EisensteinSolution> found;
    for (int c0 = 0; c0 <= 1; ++c0) {
        // On the line alpha + beta = c0 the residual coefficient at each order
        // is a polynomial of degree <= 3 in alpha; sample at alpha = 0..3.
        std::vector<FracSeries> residuals;
        for (long long a = 0; a < 4; ++a) {
            Rat alpha = rat(a), beta = rat(c0) - alpha;
            FracSeries Q = eisenstein_combination(alpha, beta, dilation, probe_trunc);
            residuals.push_back(ode_residual(d, shape, Q));
        }
        Poly g;  // gcd of the coefficient polynomials seen so far
        bool all_zero = true;
        for (long long n = 0; n <= probe_order; ++n) {
            std::array<Rat, 4> v;
            bool usable = true;
            for (int i = 0; i < 4; ++i) {
                if (residuals[static_cast<std::size_t>(i)].trunc_order() <= rat(n)) {
                    usable = false;
                    break;
                }
                v[static_cast<std::size_t>(i)] =
                    residuals[static_cast<std::size_t>(i)].coeff(rat(n));
            }
            if (!usable) break;
            Poly p = lagrange_cubic(v);
            if (poly_zero(p)) continue;
            all_zero = false;
            g = poly_zero(g) ? p : poly_gcd(g, p);
            if (g.size() == 1) break;  // nonzero constant gcd: no common root
        }
        if (all_zero)
            throw SingularSystem("residual vanishes identically along a constant-term line");
        std::vector<Rat> roots =
            g.size() == 1 ? std::vector<Rat>{} : poly_rational_roots(g);
        for (const Rat& alpha : roots) {
            Rat beta = rat(c0) - alpha;
            FracSeries Q =
                eisenstein_combination(alpha, beta, dilation, rat(verify_order + 2));
            VerifyResult res = verify_ode(d, shape, Q, verify_order);
            if (res.verified) found.push_back(EisensteinSolution{alpha, beta});
        }
    }
    std::sort(found.begin(), found.end(), [](const EisensteinSolution& x,
                                             const EisensteinSolution& y) {
        return x.alpha < y.alpha || (x.alpha == y.alpha && x.beta < y.beta);
    });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const EisensteinSolution& x, const EisensteinSolution& y) {
                                return x.alpha == y.alpha && x.beta == y.beta;
                            }),
                found.end());
    return found;
}

}  // namespace modparam
