#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "modparam/frac_series.hpp"

namespace modparam {

// One factor eta(d*tau)^r of an eta quotient.
struct EtaFactor {
    long long d = 1;
    long long r = 1;
};

// Parses "1^4 5^4" / "2^2 10^2" / "6^4"; negative powers as "3^-2".
std::vector<EtaFactor> parse_eta_spec(const std::string& text);
std::string eta_spec_str(const std::vector<EtaFactor>& factors);

// Product of eta(d*tau)^r as a q-series (q = e^{2 pi i tau}); exponents live
// on the 1/24 grid. Known below trunc.
FracSeries eta_quotient(const std::vector<EtaFactor>& factors, const Rat& trunc);

// Normalized Eisenstein series of weight 4 or 6 in q^dilation.
FracSeries eisenstein_e(int weight, long long dilation, const Rat& trunc);

// The distinguished weight-k cusp form Delta_{N,k} = f(2 tau/k)^{k/2} built
// from a weight-2 newform f of level N k^2 / 4. F is the k/2-th root when the
// object was built from a newform; CLI paths may wrap a raw series instead.
struct DeltaNk {
    long long N = 0;
    long long k = 0;
    std::optional<FracSeries> F;
    FracSeries delta;

    DeltaNk(long long N_, long long k_, std::optional<FracSeries> F_, FracSeries delta_)
        : N(N_), k(k_), F(std::move(F_)), delta(std::move(delta_)) {}
};

// Requires: k even >= 2, newform on the integer grid with leading term
// 1*q^1 and support on n == 1 (mod k/2); throws SupportViolation /
// UnsupportedNormalization otherwise. The result's delta has integer
// exponents, leading term 1*q^1.
DeltaNk make_delta(long long N, long long k, const FracSeries& newform);

// Wraps a series (integer exponents, leading term 1*q^1) directly.
DeltaNk wrap_delta(long long N, long long k, const FracSeries& delta);

// Serre-type derivation attached to Delta_{N,k}:
//   d(f) = (k/4) theta(f) - f * theta(Delta)/Delta,   theta = q d/dq.
// Sends weight-k objects to weight-(k+2) objects; d(Delta) = 0 when k = 4.
FracSeries ramanujan_serre(const DeltaNk& d, const FracSeries& f);

// Evaluates the q-series at tau in the upper half plane (q^e = e^{2 pi i e tau}).
// The discarded tail is estimated as C e^{-2 pi T y} / (1 - e^{-2 pi y / w})
// with T the truncation order, y = Im tau, and C = max(1, largest |coeff|
// among the top half of stored terms); throws TailTooLarge if the estimate
// exceeds tail_tol.
std::complex<double> eval_series(const FracSeries& s, std::complex<double> tau,
                                 double tail_tol = 1e-9);

// 2x2 matrix with rational entries and positive determinant, acting on the
// upper half plane by Moebius transformation.
struct GroupElement {
    Rat a, b, c, d;
};

Rat det(const GroupElement& g);
GroupElement mul(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);
std::complex<double> moebius(const GroupElement& g, std::complex<double> tau);
bool is_integral(const GroupElement& g);

// Integral, det 1, c == 0 (mod c_mod), b == 0 (mod b_mod).
bool in_congruence_group(const GroupElement& g, long long c_mod, long long b_mod = 1);

// The five fixed sample points used for slash-eigenvalue measurements.
std::vector<std::complex<double>> default_slash_samples();

struct SlashResult {
    std::complex<double> lambda;  // ratio at the first sample
    double max_deviation;         // max |ratio_i - lambda| over all samples
};

// Measures f|_w g = (det g)^{w/2} (c tau + d)^{-w} f(g tau) against lambda*f
// on the samples. The series must converge at every g(sample).
SlashResult slash_check(const FracSeries& f, long long weight, const GroupElement& g,
                        const std::vector<std::complex<double>>& samples,
                        double tail_tol = 1e-9);
SlashResult slash_check(const FracSeries& f, long long weight, const GroupElement& g);

}  // namespace modparam
