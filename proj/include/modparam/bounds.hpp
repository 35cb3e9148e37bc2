#pragma once

// Finiteness bounds for modular parametrizations: an unconditional lower
// bound on the degree of a parametrization against cusp-ramification upper
// bounds. When the lower bound exceeds the upper bound the level is excluded,
// and since the lower bound grows strictly faster, only finitely many levels
// can survive.

#include <iosfwd>
#include <string>
#include <vector>

namespace modparam {

// Euler--Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286;

// Unconditional degree lower bound
//   M^{7/6} / log M * (1/10300) / sqrt(0.02 + log log M),
// natural logs. Requires M > 2 (so that log log M is defined and positive).
double watkins_lower(double M);

// Analytic genus upper bound
//   M * (e^gamma / (2 pi^2)) * (log log M + 2 / log log M).
// Requires M > 2. No factorization needed, so it extends to huge M.
double cwz_genus_upper(double M);

// Exact genus and cusp count of the modular curve X_0(M), M >= 1.
// index mu = M prod_{p|M} (1 + 1/p); nu2, nu3 by the standard
// Legendre-symbol products; nu_inf = sum_{d|M} phi(gcd(d, M/d));
// genus = 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2 (always an exact integer).
struct GenusCusps {
    long long genus = 0;
    long long nu_inf = 0;
};
GenusCusps genus_cusps_exact(long long M);

// Which cusp bound a report used.
enum class CuspBound { trivial_M, exact };

// One row of a finiteness check. The comparison is lower > rhs => excluded.
struct BoundReport {
    double M = 0;
    double lower = 0;          // degree lower bound (mode-dependent)
    double genus_upper = 0;    // genus bound entering rhs (analytic or exact)
    CuspBound cusp_bound_used = CuspBound::trivial_M;
    long long nu_inf = -1;     // exact cusp count, or -1 when not computed
    double rhs = 0;            // full right-hand side the lower bound must beat
    bool excluded = false;
};

std::string verdict_str(const BoundReport& r);  // parametrization_excluded / not_excluded

// mode "paper":
//   lower = watkins_lower(M), rhs = 2*cwz_genus_upper(M) - 2 + M
//   (trivial cusp-count bound #cusps <= M); valid for any real M > 2.
// mode "abramovich_remark":
//   lower = 7M/1600, rhs = min(2g - 2 + nu_inf, 24*nu_inf) with the exact
//   genus and cusp count; M must be an integer.
BoundReport finiteness_check(double M, const std::string& mode = "paper");

// The pinned geometric scan grid M_i = round(2^19 * 2^(2i/1000)), i = 1..1000,
// covering (2^19, 2^21].
std::vector<long long> scan_grid();

// finiteness_check on every grid point, in order.
std::vector<BoundReport> finiteness_scan(const std::string& mode = "paper");

// All highly composite numbers (record-setting divisor counts) up to n.
std::vector<long long> highly_composite_upto(long long n);

// CSV table: header "M,watkins_lower,genus_upper,nu_inf,rhs,verdict";
// nu_inf prints empty when the row did not compute it.
void write_bounds_csv(std::ostream& os, const std::vector<BoundReport>& rows);

}  // namespace modparam
