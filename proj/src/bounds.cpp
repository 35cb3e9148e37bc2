#include "modparam/bounds.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "modparam/errors.hpp"

namespace modparam {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_m(double M) {
    if (!(M > 2.0)) throw DomainError("bound formulas need M > 2 (log log M undefined)");
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

long long euler_phi(long long n) {
    long long r = n;
    for (const auto& [p, e] : factor_ll(n)) r -= r / p;
    return r;
}

std::string real_str(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

double watkins_lower(double M) {
    require_m(M);
    double lg = std::log(M);
    double ll = std::log(lg);
    return std::pow(M, 7.0 / 6.0) / lg * (1.0 / 10300.0) / std::sqrt(0.02 + ll);
}

double cwz_genus_upper(double M) {
    require_m(M);
    double ll = std::log(std::log(M));
    return M * (std::exp(kEulerGamma) / (2.0 * kPi * kPi)) * (ll + 2.0 / ll);
}

GenusCusps genus_cusps_exact(long long M) {
    if (M < 1) throw DomainError("genus formulas need M >= 1");
    auto fac = factor_ll(M);
    long long mu = M;
    for (const auto& [p, e] : fac) mu = mu / p * (p + 1);
    long long nu2;
    if (M % 4 == 0) {
        nu2 = 0;
    } else {
        nu2 = 1;
        for (const auto& [p, e] : fac) {
            if (p == 2) continue;
            nu2 *= 1 + (p % 4 == 1 ? 1 : -1);
        }
    }
    long long nu3;
    if (M % 9 == 0) {
        nu3 = 0;
    } else {
        nu3 = 1;
        for (const auto& [p, e] : fac) {
            if (p == 3) continue;  // (−3|3) = 0 contributes a factor 1 + 0
            nu3 *= 1 + (p % 3 == 1 ? 1 : -1);
        }
    }
    long long nu_inf = 0;
    for (long long d = 1; d * d <= M; ++d) {
        if (M % d != 0) continue;
        nu_inf += euler_phi(std::gcd(d, M / d));
        long long d2 = M / d;
        if (d2 != d) nu_inf += euler_phi(std::gcd(d2, M / d2));
    }
    long long g12 = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nu_inf;
    if (g12 % 12 != 0)
        throw ModparamError("genus formula did not produce an integer (internal error)");
    return GenusCusps{g12 / 12, nu_inf};
}

std::string verdict_str(const BoundReport& r) {
    return r.excluded ? "parametrization_excluded" : "not_excluded";
}

BoundReport finiteness_check(double M, const std::string& mode) {
    require_m(M);
    BoundReport r;
    r.M = M;
    if (mode == "paper") {
        r.lower = watkins_lower(M);
        r.genus_upper = cwz_genus_upper(M);
        r.cusp_bound_used = CuspBound::trivial_M;
        r.nu_inf = -1;
        r.rhs = 2.0 * r.genus_upper - 2.0 + M;
    } else if (mode == "abramovich_remark") {
        if (M != std::floor(M) || M > 9.0e15)
            throw DomainError("abramovich_remark mode needs an exact integer level");
        auto gc = genus_cusps_exact(static_cast<long long>(M));
        r.lower = 7.0 * M / 1600.0;
        r.genus_upper = static_cast<double>(gc.genus);
        r.cusp_bound_used = CuspBound::exact;
        r.nu_inf = gc.nu_inf;
        double ram = 2.0 * static_cast<double>(gc.genus) - 2.0 + static_cast<double>(gc.nu_inf);
        double cusp24 = 24.0 * static_cast<double>(gc.nu_inf);
        r.rhs = std::min(ram, cusp24);
    } else {
        throw std::invalid_argument("mode must be 'paper' or 'abramovich_remark'");
    }
    r.excluded = r.lower > r.rhs;
    return r;
}

std::vector<long long> scan_grid() {
    std::vector<long long> out;
    out.reserve(1000);
    for (int i = 1; i <= 1000; ++i)
        out.push_back(std::llround(524288.0 * std::pow(2.0, 2.0 * i / 1000.0)));
    return out;
}

std::vector<BoundReport> finiteness_scan(const std::string& mode) {
    std::vector<BoundReport> rows;
    rows.reserve(1000);
    for (long long M : scan_grid()) rows.push_back(finiteness_check(static_cast<double>(M), mode));
    return rows;
}

std::vector<long long> highly_composite_upto(long long n) {
    if (n < 1) return {};
    std::vector<int> d(static_cast<std::size_t>(n + 1), 0);
    for (long long i = 1; i <= n; ++i)
        for (long long j = i; j <= n; j += i) ++d[static_cast<std::size_t>(j)];
    std::vector<long long> out;
    int best = 0;
    for (long long i = 1; i <= n; ++i)
        if (d[static_cast<std::size_t>(i)] > best) {
            best = d[static_cast<std::size_t>(i)];
            out.push_back(i);
        }
    return out;
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundReport>& rows) {
    os << "M,watkins_lower,genus_upper,nu_inf,rhs,verdict\n";
    for (const auto& r : rows) {
        os << real_str(r.M) << "," << real_str(r.lower) << "," << real_str(r.genus_upper)
           << ",";
        if (r.nu_inf >= 0) os << r.nu_inf;
        os << "," << real_str(r.rhs) << "," << verdict_str(r) << "\n";
    }
}

}  // namespace modparam
