#include "modparam/periods.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "modparam/errors.hpp"

namespace modparam {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

long long mod_inverse(long long a, long long m) {
    long long t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
    while (nr != 0) {
        long long q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw std::invalid_argument("element not invertible in Z/m");
    return ((t % m) + m) % m;
}

std::vector<std::pair<long long, long long>> factor_ll(long long n) {
    std::vector<std::pair<long long, long long>> out;
    for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        long long e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<std::pair<mpz_class, long long>> factor_mpz(mpz_class n) {
    std::vector<std::pair<mpz_class, long long>> out;
    if (n < 0) n = -n;
    for (mpz_class p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (!mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) continue;
        long long e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
        if (p > 1000000) break;  // residual cofactor handled below
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
            throw std::invalid_argument("cannot factor a large composite denominator");
        out.emplace_back(n, 1);
    }
    return out;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool collinear_pair(cplx a, cplx b, double eps = 1e-6) {
    return std::abs(cross(a, b)) < eps * std::abs(a) * std::abs(b);
}

cplx real_gcd(cplx a, cplx b, double tol) {
    for (int i = 0; i < 64; ++i) {
        if (std::abs(a) < std::abs(b)) std::swap(a, b);
        if (std::abs(b) < tol) return a;
        double n = std::round((a / b).real());
        a -= n * b;
        if (std::abs(a) < tol) return b;
    }
    throw DegenerateLattice("collinear period reduction did not converge");
}

std::pair<cplx, cplx> gauss_pair(cplx v1, cplx v2) {
    for (int i = 0; i < 64; ++i) {
        if (std::abs(v2) < std::abs(v1)) std::swap(v1, v2);
        double m = std::round((v2.real() * v1.real() + v2.imag() * v1.imag()) /
                              std::norm(v1));
        if (m == 0) return {v1, v2};
        cplx v2n = v2 - m * v1;
        if (std::abs(v2n) >= std::abs(v2)) return {v1, v2};
        v2 = v2n;
    }
    return {v1, v2};
}

cplx reduce_point(cplx w, cplx v1, cplx v2) {
    double det = cross(v1, v2);
    if (det == 0) throw DegenerateLattice("cannot reduce against a collinear basis");
    double xx = (w.real() * v2.imag() - w.imag() * v2.real()) / det;
    double yy = (v1.real() * w.imag() - v1.imag() * w.real()) / det;
    return w - std::round(xx) * v1 - std::round(yy) * v2;
}

}  // namespace

std::vector<long long> primes_upto(long long n) {
    std::vector<long long> out;
    if (n < 2) return out;
    std::vector<bool> sieve(static_cast<std::size_t>(n + 1), true);
    sieve[0] = sieve[1] = false;
    for (long long i = 2; i * i <= n; ++i)
        if (sieve[static_cast<std::size_t>(i)])
            for (long long j = i * i; j <= n; j += i) sieve[static_cast<std::size_t>(j)] = false;
    for (long long i = 2; i <= n; ++i)
        if (sieve[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

mpz_class model_disc(const IntegralModel& m) {
    mpz_class b(static_cast<long>(m.a2)), c(static_cast<long>(m.a4)),
        d(static_cast<long>(m.a6));
    return 18 * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * c * c * c - 27 * d * d;
}

long long ap_point_count(const IntegralModel& m, long long p) {
    if (p == 2) throw BadPrime("point counting in characteristic 2 is not supported");
    if (p < 3) throw std::invalid_argument("p must be an odd prime");
    if (p > 50000000) throw std::invalid_argument("point count cap exceeded");
    mpz_class disc = model_disc(m);
    if (mpz_divisible_ui_p(disc.get_mpz_t(), static_cast<unsigned long>(p)))
        throw BadPrime("model is singular modulo " + std::to_string(p));
    std::vector<signed char> chi(static_cast<std::size_t>(p), -1);
    chi[0] = 0;
    for (long long x = 1; x < p; ++x) chi[static_cast<std::size_t>(x * x % p)] = 1;
    long long a2 = ((m.a2 % p) + p) % p, a4 = ((m.a4 % p) + p) % p, a6 = ((m.a6 % p) + p) % p;
    long long s = 0;
    for (long long x = 0; x < p; ++x) {
        long long f = (x + a2) % p;
        f = (f * x + a4) % p;
        f = (f * x + a6) % p;
        s += chi[static_cast<std::size_t>(f)];
    }
    long long ap = -s;
    if (ap * ap > 4 * p)
        throw ModparamError("Hasse bound violated at p = " + std::to_string(p) +
                            " (internal error)");
    return ap;
}

RationalCubic parse_curve(const std::string& text) {
    std::optional<Rat> A, B;
    std::istringstream is(text);
    std::string piece;
    while (std::getline(is, piece, ',')) {
        auto notsp = [](char ch) { return ch != ' ' && ch != '\t'; };
        piece.erase(piece.begin(), std::find_if(piece.begin(), piece.end(), notsp));
        while (!piece.empty() && !notsp(piece.back())) piece.pop_back();
        if (piece.empty()) continue;
        if (piece.rfind("A=", 0) == 0)
            A = parse_rat(piece.substr(2));
        else if (piece.rfind("B=", 0) == 0)
            B = parse_rat(piece.substr(2));
        else
            throw std::invalid_argument("curve must be given as \"A=<rat>,B=<rat>\"; got '" +
                                        piece + "'");
    }
    if (!A || !B) throw std::invalid_argument("curve needs both A= and B=");
    return RationalCubic{*A, *B};
}

std::string curve_str(const RationalCubic& c) {
    return "A=" + rat_str(c.A) + ",B=" + rat_str(c.B);
}

mpz_class minimal_scale(const RationalCubic& c) {
    std::map<mpz_class, long long> need;
    for (const auto& [p, e] : factor_mpz(mpz_class(c.A.get_den())))
        need[p] = std::max(need[p], (e + 3) / 4);
    for (const auto& [p, e] : factor_mpz(mpz_class(c.B.get_den())))
        need[p] = std::max(need[p], (e + 5) / 6);
    mpz_class u = 1;
    for (const auto& [p, e] : need)
        for (long long i = 0; i < e; ++i) u *= p;
    return u;
}

namespace {

// Smallest w making the general model (a2, a4, a6) integral under
// (a2, a4, a6) -> (w^2 a2, w^4 a4, w^6 a6).
mpz_class model_scale(const Rat& a2, const Rat& a4, const Rat& a6) {
    std::map<mpz_class, long long> need;
    for (const auto& [p, e] : factor_mpz(mpz_class(a2.get_den())))
        need[p] = std::max(need[p], (e + 1) / 2);
    for (const auto& [p, e] : factor_mpz(mpz_class(a4.get_den())))
        need[p] = std::max(need[p], (e + 3) / 4);
    for (const auto& [p, e] : factor_mpz(mpz_class(a6.get_den())))
        need[p] = std::max(need[p], (e + 5) / 6);
    mpz_class w = 1;
    for (const auto& [p, e] : need)
        for (long long i = 0; i < e; ++i) w *= p;
    return w;
}

IntegralModel scaled_model(const Rat& a2, const Rat& a4, const Rat& a6) {
    mpz_class w = model_scale(a2, a4, a6);
    Rat w2(w * w), w4(w * w * w * w), w6(w * w * w * w * w * w);
    Rat b2 = a2 * w2, b4 = a4 * w4, b6 = a6 * w6;
    return IntegralModel{to_ll(b2.get_num()), to_ll(b4.get_num()), to_ll(b6.get_num())};
}

}  // namespace

std::vector<IntegralModel> integral_models(const RationalCubic& c) {
    std::vector<IntegralModel> out;
    out.push_back(scaled_model(Rat(0), c.A, c.B));
    mpz_class u = minimal_scale(c);
    if (mpz_divisible_ui_p(u.get_mpz_t(), 3)) {
        // A shift x -> x + s/3 can restore good reduction at 3 when the plain
        // rescale was forced to pick up a factor of 3.
        for (long long s : {1, -1, 2, -2, 4, -4}) {
            Rat r = rat(s, 3);
            Rat a2 = 3 * r;
            Rat a4 = 3 * r * r + c.A;
            Rat a6 = r * r * r + c.A * r + c.B;
            if (!is_integer(a2)) continue;
            IntegralModel m = scaled_model(a2, a4, a6);
            if (m.a4 == out.front().a4 && m.a6 == out.front().a6 && m.a2 == out.front().a2)
                continue;
            mpz_class disc = model_disc(m);
            if (disc == 0 || mpz_divisible_ui_p(disc.get_mpz_t(), 3)) continue;
            out.push_back(m);
            break;
        }
    }
    return out;
}

long long curve_ap(const std::vector<IntegralModel>& models, long long p) {
    std::string reasons;
    for (const auto& m : models) {
        try {
            return ap_point_count(m, p);
        } catch (const BadPrime& e) {
            reasons += std::string(reasons.empty() ? "" : "; ") + e.what();
        }
    }
    throw BadPrime("no usable integral model at p = " + std::to_string(p) + " (" + reasons +
                   "); supply a seed value");
}

long long CoeffTable::at(long long n) const {
    if (n < 1 || n > nmax())
        throw InsufficientCoefficients("coefficient a_" + std::to_string(n) +
                                       " is outside the table (nmax = " +
                                       std::to_string(nmax()) + ")");
    return a[static_cast<std::size_t>(n)];
}

CoeffTable build_coeff_table(const RationalCubic& curve, long long level, long long nmax,
                             const std::map<long long, long long>& seed_ap) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    if (nmax < 1) throw std::invalid_argument("nmax must be at least 1");
    CoeffTable t;
    t.level = level;
    t.a.assign(static_cast<std::size_t>(nmax + 1), 0);
    t.a[1] = 1;
    auto models = integral_models(curve);
    for (long long p : primes_upto(nmax)) {
        bool divides = level % p == 0;
        bool square_divides = divides && (level / p) % p == 0;
        long long apv;
        auto it = seed_ap.find(p);
        if (it != seed_ap.end()) {
            apv = it->second;
            if (square_divides && apv != 0)
                throw std::invalid_argument("a_" + std::to_string(p) +
                                            " must be 0 when p^2 divides the level");
            if (divides && !square_divides && apv * apv != 1)
                throw std::invalid_argument("a_" + std::to_string(p) +
                                            " must be +1 or -1 when p exactly divides the "
                                            "level");
        } else if (square_divides) {
            apv = 0;
        } else if (divides) {
            throw MissingBadPrime("a_" + std::to_string(p) +
                                  " is not determined by point counts (p exactly divides "
                                  "the level; the value is +1 or -1 and must be seeded)");
        } else {
            apv = curve_ap(models, p);
        }
        long long pk = p, prev = 1, cur = apv;
        while (pk <= nmax) {
            t.a[static_cast<std::size_t>(pk)] = cur;
            if (pk > nmax / p) break;
            pk *= p;
            long long nxt = divides ? cur * apv : cur * apv - p * prev;
            prev = cur;
            cur = nxt;
        }
    }
    // Multiplicativity for mixed prime factorizations.
    std::vector<long long> spf(static_cast<std::size_t>(nmax + 1), 0);
    for (long long i = 2; i <= nmax; ++i) {
        if (spf[static_cast<std::size_t>(i)] != 0) continue;
        for (long long j = i; j <= nmax; j += i)
            if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = i;
    }
    for (long long n = 2; n <= nmax; ++n) {
        long long p = spf[static_cast<std::size_t>(n)];
        long long q = 1, m = n;
        while (m % p == 0) {
            m /= p;
            q *= p;
        }
        if (m == 1) continue;  // prime power: already set
        t.a[static_cast<std::size_t>(n)] =
            t.a[static_cast<std::size_t>(q)] * t.a[static_cast<std::size_t>(m)];
    }
    return t;
}

void write_coeff_table(std::ostream& os, const CoeffTable& t) {
    os << "level=" << t.level << " nmax=" << t.nmax() << "\n";
    for (long long n = 1; n <= t.nmax(); ++n)
        os << n << " " << t.a[static_cast<std::size_t>(n)] << "\n";
}

CoeffTable read_coeff_table(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty coefficient table");
    std::istringstream head(line);
    std::string ltok, ntok, extra;
    if (!(head >> ltok >> ntok) || ltok.rfind("level=", 0) != 0 || ntok.rfind("nmax=", 0) != 0 ||
        (head >> extra))
        throw std::invalid_argument("table header must be 'level=<M> nmax=<n>'");
    CoeffTable t;
    long long nmax = 0;
    try {
        t.level = std::stoll(ltok.substr(6));
        nmax = std::stoll(ntok.substr(5));
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed coefficient table header");
    }
    if (t.level < 1 || nmax < 1) throw std::invalid_argument("bad level or nmax in table");
    t.a.assign(static_cast<std::size_t>(nmax + 1), 0);
    long long expect = 1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long long n, v;
        if (!(ls >> n >> v) || (ls >> extra))
            throw std::invalid_argument("table line must be '<n> <a_n>'");
        if (n != expect)
            throw std::invalid_argument("table lines must cover n = 1.." +
                                        std::to_string(nmax) + " in order");
        t.a[static_cast<std::size_t>(n)] = v;
        ++expect;
    }
    if (expect != nmax + 1)
        throw std::invalid_argument("table ends at n = " + std::to_string(expect - 1) +
                                    " but header promises nmax = " + std::to_string(nmax));
    if (t.a[1] != 1) throw std::invalid_argument("table must be normalized with a_1 = 1");
    return t;
}

void write_coeff_table_file(const std::string& path, const CoeffTable& t) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_coeff_table(os, t);
}

CoeffTable read_coeff_table_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_coeff_table(is);
}

std::string default_table_path(long long level) {
    const char* dir = std::getenv("MODPARAM_DATA");
    if (dir == nullptr || *dir == '\0')
        throw std::runtime_error("MODPARAM_DATA is not set; cannot locate coefficient tables");
    return std::string(dir) + "/level" + std::to_string(level) + ".coeffs";
}

FracSeries table_series(const CoeffTable& t) {
    FracSeries s(1, rat(t.nmax() + 1));
    for (long long n = 1; n <= t.nmax(); ++n)
        if (t.a[static_cast<std::size_t>(n)] != 0)
            s.set(rat(n), rat(t.a[static_cast<std::size_t>(n)]));
    return s;
}

cplx eichler_psi(const CoeffTable& t, cplx tau, double tol) {
    double y = tau.imag();
    if (!(y > 0)) throw std::invalid_argument("eichler_psi needs Im tau > 0");
    long long N = t.nmax();
    double big = 1.0;
    for (long long n = N / 2 + 1; n <= N; ++n)
        big = std::max(big, std::abs(static_cast<double>(t.a[static_cast<std::size_t>(n)])) /
                                static_cast<double>(n));
    double tail = big * std::exp(-kPi * static_cast<double>(N + 1) * y) /
                  (1.0 - std::exp(-kPi * y));
    if (!(tail <= tol)) {
        std::ostringstream os;
        os << "Eichler tail estimate " << tail << " exceeds tolerance " << tol
           << " at Im tau = " << y << " (table nmax = " << N << ")";
        throw TailTooLarge(os.str());
    }
    cplx acc(0.0, 0.0);
    const cplx i_pi_tau = cplx(0.0, kPi) * tau;
    for (long long n = 1; n <= N; ++n) {
        long long an = t.a[static_cast<std::size_t>(n)];
        if (an == 0) continue;
        acc += (static_cast<double>(an) / static_cast<double>(n)) *
               std::exp(i_pi_tau * static_cast<double>(n));
    }
    return acc;
}

cplx eichler_period(const CoeffTable& t, const GroupElement& g, double tol) {
    if (!is_integral(g) || det(g) != 1)
        throw std::invalid_argument("period integration needs an integral det-1 element");
    long long a = to_ll(g.a.get_num()), b = to_ll(g.b.get_num());
    long long c = to_ll(g.c.get_num()), d = to_ll(g.d.get_num());
    if (c == 0) {
        if (b % 2 != 0)
            throw std::invalid_argument("translation by an odd shift is outside the group");
        return cplx(0.0, 0.0);
    }
    if (c < 0) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    double cd = static_cast<double>(c);
    cplx tau1(-static_cast<double>(d) / cd, 1.0 / cd);
    cplx tau2(static_cast<double>(a) / cd, 1.0 / cd);
    return eichler_psi(t, tau2, tol) - eichler_psi(t, tau1, tol);
}

std::vector<GroupElement> group_sample_elements(long long N, long long k, long long c_max,
                                                long long a_bound) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("k must be even");
    long long M = (k / 2) * (k / 2) * N;
    std::vector<GroupElement> out;
    for (long long c = 1; c <= c_max; ++c) {
        long long mod = M * c;
        for (long long a = -a_bound; a <= a_bound; ++a) {
            if (std::gcd(a < 0 ? -a : a, mod) != 1) continue;
            long long d = mod_inverse(a, mod);
            long long b2 = (a * d - 1) / mod;
            out.push_back(GroupElement{rat(a), rat((k / 2) * b2), rat((k / 2) * N * c),
                                       rat(d)});
        }
    }
    return out;
}

double lattice_distance(cplx w, cplx w1, cplx w2) {
    return std::abs(reduce_point(w, w1, w2));
}

PeriodLattice lattice_from_periods(const std::vector<cplx>& ws, double tol) {
    std::vector<cplx> pts;
    for (cplx w : ws)
        if (std::abs(w) > tol) pts.push_back(w);
    std::sort(pts.begin(), pts.end(),
              [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
    std::vector<cplx> basis;
    for (cplx w : pts) {
        if (basis.empty()) {
            basis.push_back(w);
            continue;
        }
        if (basis.size() == 1) {
            cplx v1 = basis[0];
            if (collinear_pair(w, v1)) {
                cplx gv = real_gcd(v1, w, tol);
                basis.clear();
                if (std::abs(gv) > tol) basis.push_back(gv);
            } else {
                auto [p1, p2] = gauss_pair(v1, w);
                basis = {p1, p2};
            }
            continue;
        }
        cplx r = reduce_point(w, basis[0], basis[1]);
        if (std::abs(r) < tol) continue;
        // The new period is outside the current lattice: absorb the triple
        // into a finer rank-2 basis. Gauss-reducing the two smallest keeps the
        // pair well conditioned, and the reduced remainder of the largest is
        // at most (|a| + |b|)/2, so the triple shrinks strictly.
        cplx x0 = basis[0], x1 = basis[1], x2 = r;
        bool done = false;
        for (int iter = 0; iter < 128; ++iter) {
            std::array<cplx, 3> vs = {x0, x1, x2};
            std::sort(vs.begin(), vs.end(),
                      [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
            cplx sa = vs[2], sb = vs[1];
            if (collinear_pair(sa, sb)) {
                cplx gv = real_gcd(sa, sb, tol);
                auto [p1, p2] = gauss_pair(gv, vs[0]);
                basis = {p1, p2};
                done = true;
                break;
            }
            auto [p1, p2] = gauss_pair(sa, sb);
            cplx r2 = reduce_point(vs[0], p1, p2);
            if (std::abs(r2) < tol) {
                basis = {p1, p2};
                done = true;
                break;
            }
            x0 = p1;
            x1 = p2;
            x2 = r2;
        }
        if (!done) throw DegenerateLattice("period absorption did not converge");
    }
    if (basis.size() < 2)
        throw DegenerateLattice("periods span a lattice of rank " +
                                std::to_string(basis.size()));
    auto [v1, v2] = gauss_pair(basis[0], basis[1]);
    if (collinear_pair(v1, v2, 1e-12))
        throw DegenerateLattice("reduced basis is numerically collinear");
    if (v1.real() < -1e-15 || (std::abs(v1.real()) <= 1e-15 && v1.imag() < 0)) v1 = -v1;
    if (cross(v1, v2) < 0) v2 = -v2;
    PeriodLattice lat{v1, v2, 0.0};
    for (cplx w : ws) lat.quality = std::max(lat.quality, lattice_distance(w, v1, v2));
    return lat;
}

LatticeInvariants lattice_invariants(const PeriodLattice& lat) {
    LatticeInvariants out;
    cplx tau = lat.w2 / lat.w1;
    if (tau.imag() < 0) tau = -tau;
    out.tau = tau;
    cplx e4 = eval_series(eisenstein_e(4, 1, rat(60)), tau, 1e-12);
    cplx e6 = eval_series(eisenstein_e(6, 1, rat(60)), tau, 1e-12);
    double pi4 = kPi * kPi * kPi * kPi;
    out.g2 = 4.0 * pi4 / 3.0 * e4 / std::pow(lat.w1, 4);
    out.g3 = 8.0 * pi4 * kPi * kPi / 27.0 * e6 / std::pow(lat.w1, 6);
    return out;
}

LatticeInvariants lattice_invariants_direct(const PeriodLattice& lat, long long radius) {
    LatticeInvariants out;
    cplx tau = lat.w2 / lat.w1;
    if (tau.imag() < 0) tau = -tau;
    out.tau = tau;
    cplx s4(0.0, 0.0), s6(0.0, 0.0);
    for (long long m = -radius; m <= radius; ++m) {
        for (long long n = -radius; n <= radius; ++n) {
            if (m == 0 && n == 0) continue;
            cplx w = static_cast<double>(m) * lat.w1 + static_cast<double>(n) * lat.w2;
            cplx inv2 = 1.0 / (w * w);
            cplx inv4 = inv2 * inv2;
            s4 += inv4;
            s6 += inv4 * inv2;
        }
    }
    out.g2 = 60.0 * s4;
    out.g3 = 140.0 * s6;
    return out;
}

Weierstrass::Weierstrass(const PeriodLattice& lat, cplx g2, cplx g3)
    : lat_(lat), g2_(g2), g3_(g3), c_(40, cplx(0.0, 0.0)) {
    c_[1] = g2 / 20.0;
    c_[2] = g3 / 28.0;
    for (std::size_t k = 3; k < c_.size(); ++k) {
        cplx s(0.0, 0.0);
        for (std::size_t m = 1; m + 1 < k; ++m) s += c_[m] * c_[k - 1 - m];
        c_[k] = 3.0 * s / static_cast<double>((2 * k + 3) * (k - 2));
    }
}

std::pair<cplx, cplx> Weierstrass::at(cplx z) const {
    z = reduce_point(z, lat_.w1, lat_.w2);
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
            cplx zz = z - static_cast<double>(dx) * lat_.w1 - static_cast<double>(dy) * lat_.w2;
            if (std::abs(zz) < std::abs(z)) z = zz;
        }
    if (std::abs(z) < 1e-12 * std::abs(lat_.w1))
        throw OnLatticePoint("z reduces to a lattice point; the function has a pole there");
    int halvings = 0;
    while (std::abs(z) > 0.7 * std::abs(lat_.w1)) {
        z /= 2.0;
        ++halvings;
        if (halvings > 60) throw ModparamError("argument reduction runaway (internal error)");
    }
    cplx z2 = z * z;
    cplx P = 1.0 / z2;
    cplx Pp = -2.0 / (z2 * z);
    cplx zp = z2;           // z^{2k}
    cplx zpo = z;           // z^{2k-1}
    for (std::size_t k = 1; k < c_.size(); ++k) {
        P += c_[k] * zp;
        Pp += 2.0 * static_cast<double>(k) * c_[k] * zpo;
        zp *= z2;
        zpo *= z2;
    }
    for (int i = 0; i < halvings; ++i) {
        cplx u2 = 6.0 * P * P - g2_ / 2.0;
        cplx w = u2 / (2.0 * Pp);
        cplx Pn = -2.0 * P + w * w;
        cplx Ppn = -Pp + w * (6.0 * P - u2 * u2 / (2.0 * Pp * Pp));
        P = Pn;
        Pp = Ppn;
    }
    return {P, Pp};
}

MdResult manin_drinfeld_gcd(const CoeffTable& t, long long bound) {
    if (bound < 1) throw std::invalid_argument("bound must be positive");
    if (bound > t.nmax())
        throw InsufficientCoefficients("gcd scan bound " + std::to_string(bound) +
                                       " exceeds table nmax " + std::to_string(t.nmax()));
    MdResult out;
    for (long long p : primes_upto(bound)) {
        if (p % t.level != 1) continue;
        long long value = p + 1 - t.at(p);
        out.gcd = std::gcd(out.gcd, value);
        out.witnesses.push_back(MdWitness{p, t.at(p), value});
    }
    return out;
}

PipelineResult periods_pipeline(const RationalCubic& curve, long long level,
                                const PipelineOptions& opt) {
    if (level % 4 != 0)
        throw std::invalid_argument("the weight-4 pipeline needs 4 | level");
    long long N = level / 4;
    std::vector<long long> free_primes;
    for (const auto& [p, e] : factor_ll(level))
        if (e == 1) free_primes.push_back(p);
    if (free_primes.size() > 3)
        throw std::invalid_argument("too many undetermined bad primes at this level");
    auto elements = group_sample_elements(N, 4, opt.c_max, opt.a_bound);
    std::vector<PipelineResult> accepted;
    for (unsigned mask = 0; mask < (1u << free_primes.size()); ++mask) {
        std::map<long long, long long> seeds;
        for (std::size_t i = 0; i < free_primes.size(); ++i)
            seeds[free_primes[i]] = (mask >> i) & 1u ? -1 : 1;
        PipelineResult cand;
        cand.seeds = seeds;
        cand.table = build_coeff_table(curve, level, opt.nmax, seeds);
        cand.periods.reserve(elements.size());
        for (const auto& g : elements)
            cand.periods.push_back(eichler_period(cand.table, g, opt.psi_tol));
        try {
            cand.lattice = lattice_from_periods(cand.periods, opt.lattice_tol);
        } catch (const DegenerateLattice&) {
            continue;
        }
        // Reject noise lattices: the basis must sit well above the tolerance
        // floor and reproduce every period.
        if (std::abs(cand.lattice.w1) < 1000.0 * opt.lattice_tol) continue;
        if (cand.lattice.quality > opt.accept_quality) continue;
        cand.invariants = lattice_invariants(cand.lattice);
        accepted.push_back(std::move(cand));
    }
    if (accepted.empty())
        throw DegenerateLattice(
            "no bad-prime sign assignment closes the periods into a discrete lattice");
    if (accepted.size() > 1)
        throw DegenerateLattice(
            "ambiguous periods: several sign assignments produce discrete lattices");
    return accepted.front();
}

RationalCubic builtin_curve(long long level) {
    if (level == 76) return RationalCubic{rat(-64, 3), rat(-1028, 27)};
    throw std::invalid_argument("no built-in curve for level " + std::to_string(level));
}

bool has_builtin_curve(long long level) { return level == 76; }

}  // namespace modparam
