#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modparam/frac_series.hpp"
#include "modparam/modforms.hpp"

namespace modparam {

// One monomial coeff * Q^deg_q * F^deg_f on the cubic right-hand side. Q
// carries weight 4 and F weight 2, so every admissible term satisfies
// 4 deg_q + 2 deg_f = 12.
struct ShapeTerm {
    Rat coeff;
    long long deg_q = 0;
    long long deg_f = 0;
};

// Right-hand side Q^3 + sum of lower terms of the differential equation
//   d_{N,k}(Q)^2 = Q^3 + ...
// terms always includes the monic cubic (1, 3, 0).
struct WeierstrassShape {
    long long k = 4;
    std::vector<ShapeTerm> terms;
};

// Validates and assembles a shape from the sub-cubic terms.
WeierstrassShape make_shape(long long k, const std::vector<ShapeTerm>& lower_terms);

// The distinguished one-parameter families, in the standard coefficient order:
//   k = 4 : {a2, a4, a6} ->  Q^3 + a2 Q^2 F^2 + a4 Q F^4 + a6 F^6
//   k = 6 : {b6}         ->  Q^3 + b6 F^6
//   k = 8 : {c4}         ->  Q^3 + c4 Q F^4
//   k = 12: {d6}         ->  Q^3 + d6 F^6
WeierstrassShape standard_shape(long long k, const std::vector<Rat>& coeffs);

// Names of the standard coefficients for weight k (e.g. {"a2","a4","a6"}).
std::vector<std::string> standard_coeff_names(long long k);

// Parses "k=4; a2=-89/13; a4=-3500/169; a6=-125000/2197" (the "k=" part is
// optional when k_hint is supplied; if both are present they must agree).
// Omitted coefficients default to zero.
WeierstrassShape parse_shape(const std::string& text,
                             std::optional<long long> k_hint = std::nullopt);
std::string shape_str(const WeierstrassShape& s);

// Coefficients of the sub-cubic standard terms in standard order.
std::vector<Rat> shape_coeffs(const WeierstrassShape& s);

// Evaluates the right-hand side; terms with deg_f a multiple of k/2 use powers
// of delta, others require the root F.
FracSeries shape_rhs(const DeltaNk& d, const WeierstrassShape& shape, const FracSeries& Q);

// d(Q)^2 - shape_rhs(Q).
FracSeries ode_residual(const DeltaNk& d, const WeierstrassShape& shape, const FracSeries& Q);

struct VerifyResult {
    FracSeries residual;
    // First exponent at which the residual can be nonzero: the exponent of the
    // first nonzero coefficient, or the truncation order if all known
    // coefficients vanish.
    Rat residual_order;
    bool verified = false;
    std::optional<std::pair<Rat, Rat>> first_failure;  // (exponent, coefficient)
};

// Checks the identity. With through_order set, the residual must be known at
// every exponent <= through_order (else TruncationTooShort) and verified means
// it vanishes there; without it, verified means the whole known residual is
// zero.
VerifyResult verify_ode(const DeltaNk& d, const WeierstrassShape& shape, const FracSeries& Q,
                        std::optional<long long> through_order = std::nullopt);

// Determines the unique power series Q = 1 + c_1 q + ... + c_order q^order
// solving the equation coefficient by coefficient: the coefficient of q^M in
// the residual is linear in c_M with slope -((k/2) M + 1). Requires c0 = 1:
// the residual's constant term is c0^2 (1 - c0), which pins c0 to 0 or 1, and
// the c0 = 0 branch leaves every recursion step pivot-free.
FracSeries solve_ode(const DeltaNk& d, const WeierstrassShape& shape, long long order,
                     const Rat& c0 = Rat(1));

struct FitResult {
    WeierstrassShape shape;
    Rat verified_below;  // residual proven zero below this exponent
};

// Recovers the standard-shape coefficients from d and Q by triangular solve
// against the leading orders of the basis series Q^a delta^j, then verifies
// the identity on the full overdetermined system (VerificationFailure names
// the first failing order otherwise).
FitResult fit_cubic(const DeltaNk& d, const FracSeries& Q);

// alpha * E4(q) + beta * E4(q^dilation), known below trunc.
FracSeries eisenstein_combination(const Rat& alpha, const Rat& beta, long long dilation,
                                  const Rat& trunc);

struct EisensteinSolution {
    Rat alpha;
    Rat beta;
};

// All pairs (alpha, beta) for which Q = alpha E4(q) + beta E4(q^dilation)
// satisfies the equation, found by scanning the two admissible constant-term
// lines alpha + beta = 1 and alpha + beta = 0 (the residual's constant term
// c0^2(1 - c0) rules out everything else). On each line the residual
// coefficients are polynomials of degree <= 3 in alpha; their gcd pins the
// candidates, and every returned pair is re-verified exactly through
// verify_order. Sorted by alpha.
std::vector<EisensteinSolution> eisenstein_solutions(const DeltaNk& d,
                                                     const WeierstrassShape& shape,
                                                     long long dilation,
                                                     long long verify_order = 60);

}  // namespace modparam
