#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"

namespace modparam {

using cplx = std::complex<double>;

std::vector<long long> primes_upto(long long n);

// Integral model y^2 = x^3 + a2 x^2 + a4 x + a6.
struct IntegralModel {
    long long a2 = 0, a4 = 0, a6 = 0;
};

// Discriminant of the cubic x^3 + a2 x^2 + a4 x + a6; the model has good
// reduction at an odd prime p iff p does not divide this.
mpz_class model_disc(const IntegralModel& m);

// Trace of Frobenius a_p = p + 1 - #E(F_p) by a quadratic-character sum over
// x in F_p. Requires an odd prime p of good reduction (BadPrime otherwise);
// the Hasse bound a_p^2 <= 4p is asserted on the result.
long long ap_point_count(const IntegralModel& m, long long p);

// Curve y^2 = x^3 + A x + B with rational coefficients.
struct RationalCubic {
    Rat A, B;
};

RationalCubic parse_curve(const std::string& text);  // "A=-64/3,B=-1028/27"
std::string curve_str(const RationalCubic& c);

// Smallest u >= 1 such that u^4 A and u^6 B are integers.
mpz_class minimal_scale(const RationalCubic& c);

// Integral models isomorphic to the curve over Q: the plain rescale
// (0, u^4 A, u^6 B) first, then shift models x -> x + s/3 (rescaled if
// needed) that can restore good reduction at 3 when 3 | u.
std::vector<IntegralModel> integral_models(const RationalCubic& c);

// a_p computed from the first integral model with good reduction at p;
// BadPrime if none works (then the value must be seeded).
long long curve_ap(const std::vector<IntegralModel>& models, long long p);

struct CoeffTable {
    long long level = 0;
    std::vector<long long> a;  // a[0] unused, a[1] = 1, ... a[nmax]
    long long nmax() const { return static_cast<long long>(a.size()) - 1; }
    long long at(long long n) const;
};

// Hecke eigenvalue table from point counts.
//  - p^2 | level: a_p = 0 (additive reduction), supplied automatically;
//  - p || level: a_p = +-1 must come from seed_ap (MissingBadPrime otherwise);
//  - good p: counted on the integral models, seed_ap may override (needed
//    only if every model degenerates at p);
//  - prime powers: a_{p^{r+1}} = a_p a_{p^r} - [p good] p a_{p^{r-1}};
//  - general n by multiplicativity.
CoeffTable build_coeff_table(const RationalCubic& curve, long long level, long long nmax,
                             const std::map<long long, long long>& seed_ap);

// Text format: "level=<M> nmax=<n>" then one line "<n> <a_n>" per 1 <= n <= nmax.
void write_coeff_table(std::ostream& os, const CoeffTable& t);
CoeffTable read_coeff_table(std::istream& is);
void write_coeff_table_file(const std::string& path, const CoeffTable& t);
CoeffTable read_coeff_table_file(const std::string& path);
// $MODPARAM_DATA/level<M>.coeffs (the environment variable must be set).
std::string default_table_path(long long level);

// The table as the q-series sum a_n q^n, known below nmax + 1.
FracSeries table_series(const CoeffTable& t);

// Eichler integral Psi(tau) = sum_{n>=1} (a_n / n) e^{pi i n tau}. The
// discarded tail is estimated as C e^{-pi (nmax+1) y} / (1 - e^{-pi y}) with
// y = Im tau and C = max(1, |a_n|/n over the upper half of the table);
// TailTooLarge if the estimate exceeds tol.
cplx eichler_psi(const CoeffTable& t, cplx tau, double tol = 1e-12);

// omega(gamma) = Psi((a + i)/c) - Psi((-d + i)/c) for an integral gamma with
// det 1 and c != 0 (the base point (-d+i)/c is mapped to (a+i)/c by gamma);
// translations (c = 0, b even) integrate to 0.
cplx eichler_period(const CoeffTable& t, const GroupElement& g, double tol = 1e-12);

// Sample of the group conjugate to Gamma_0((k^2/4) N) acting on f(2 tau / k):
// matrices (a, (k/2) b; (k/2) N c, d), det 1, for c in 1..c_max and
// |a| <= a_bound with gcd(a, (k^2/4) N c) = 1.
std::vector<GroupElement> group_sample_elements(long long N, long long k,
                                                long long c_max = 2,
                                                long long a_bound = 40);

struct PeriodLattice {
    cplx w1, w2;     // reduced basis, |w1| <= |w2|, canonical signs
    double quality;  // worst distance from an input period to the lattice
};

// Reduces a finite set of complex numbers to a basis of the lattice they
// generate: values below tol are treated as zero, a Lagrange-Gauss step keeps
// a candidate pair reduced, and any period outside the current lattice
// triggers a bounded absorption loop that strictly shrinks the basis.
// DegenerateLattice if the values span rank < 2 or the loops fail to close.
PeriodLattice lattice_from_periods(const std::vector<cplx>& ws, double tol = 1e-8);

// Nearest lattice point distance |w - m w1 - n w2| over integers m, n.
double lattice_distance(cplx w, cplx w1, cplx w2);

struct LatticeInvariants {
    cplx g2, g3;
    cplx tau;  // w2 / w1 normalized to the upper half plane
};

// g2 = (4 pi^4 / 3) E4(tau) / w1^4 and g3 = (8 pi^6 / 27) E6(tau) / w1^6.
LatticeInvariants lattice_invariants(const PeriodLattice& lat);
// Direct Eisenstein sums 60 sum' w^-4, 140 sum' w^-6 truncated at the given
// radius; slowly convergent, used as a cross-check only.
LatticeInvariants lattice_invariants_direct(const PeriodLattice& lat, long long radius = 200);

// Weierstrass elliptic function of the lattice: Laurent series near 0 plus
// argument halving/duplication for larger |z|.
class Weierstrass {
  public:
    Weierstrass(const PeriodLattice& lat, cplx g2, cplx g3);
    // (p(z), p'(z)); OnLatticePoint if z reduces to (numerically) 0.
    std::pair<cplx, cplx> at(cplx z) const;
    cplx g2() const { return g2_; }
    cplx g3() const { return g3_; }

  private:
    PeriodLattice lat_;
    cplx g2_, g3_;
    std::vector<cplx> c_;  // Laurent coefficients of p(z) - 1/z^2
};

struct MdWitness {
    long long p;
    long long ap;
    long long value;  // p + 1 - a_p
};

struct MdResult {
    long long gcd = 0;  // 0 when no admissible prime was found
    std::vector<MdWitness> witnesses;
};

// gcd of p + 1 - a_p over primes p <= bound with p == 1 (mod level).
MdResult manin_drinfeld_gcd(const CoeffTable& t, long long bound);

struct PipelineOptions {
    long long nmax = 1200;    // coefficient table length for Psi
    double psi_tol = 1e-12;   // Eichler tail tolerance
    double lattice_tol = 1e-8;
    double accept_quality = 1e-9;  // lattice must reproduce the periods this well
    long long c_max = 2;
    long long a_bound = 40;
};

struct PipelineResult {
    std::map<long long, long long> seeds;  // resolved bad-prime eigenvalues
    CoeffTable table;
    std::vector<cplx> periods;
    PeriodLattice lattice;
    LatticeInvariants invariants;
};

// End-to-end period computation for a weight-4 level (4 | level, N = level/4):
// builds the coefficient table (trying both signs at each exactly-dividing bad
// prime), integrates the Eichler periods over the group sample, and keeps the
// unique sign choice whose periods close up into a discrete rank-2 lattice.
PipelineResult periods_pipeline(const RationalCubic& curve, long long level,
                                const PipelineOptions& opt = PipelineOptions{});

// The bundled worked example: the level-76 curve y^2 = x^3 - (64/3) x - 1028/27.
RationalCubic builtin_curve(long long level);
bool has_builtin_curve(long long level);

}  // namespace modparam
