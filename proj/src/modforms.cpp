#include "modparam/modforms.hpp"

#include <cmath>
#include <sstream>

#include "modparam/errors.hpp"

namespace modparam {

namespace {

// Euler product prod_{n>=1} (1 - x^n) expanded by the pentagonal number
// theorem, substituted x = q^d; integer exponents, known below trunc.
FracSeries euler_product(long long d, const Rat& trunc) {
    FracSeries p(1, trunc);
    if (trunc > 0) p.set(rat(0), rat(1));
    for (long long m = 1;; ++m) {
        long long g1 = d * m * (3 * m - 1) / 2;
        long long g2 = d * m * (3 * m + 1) / 2;
        bool any = false;
        Rat sign = (m % 2 == 0) ? rat(1) : rat(-1);
        if (rat(g1) < trunc) {
            p.set(rat(g1), sign);
            any = true;
        }
        if (rat(g2) < trunc) {
            p.set(rat(g2), sign);
            any = true;
        }
        if (!any) break;
    }
    return p;
}

Rat sigma(long long n, int power) {
    Rat s(0);
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        long long e = n / d;
        Rat dp(1), ep(1);
        for (int i = 0; i < power; ++i) {
            dp *= rat(d);
            ep *= rat(e);
        }
        s += dp;
        if (e != d) s += ep;
    }
    return s;
}

}  // namespace

std::vector<EtaFactor> parse_eta_spec(const std::string& text) {
    std::istringstream is(text);
    std::vector<EtaFactor> out;
    std::string tok;
    while (is >> tok) {
        std::size_t caret = tok.find('^');
        if (caret == std::string::npos || caret == 0 || caret + 1 == tok.size())
            throw std::invalid_argument("eta factor must look like 'd^r': '" + tok + "'");
        EtaFactor f;
        try {
            std::size_t used = 0;
            f.d = std::stoll(tok.substr(0, caret), &used);
            if (used != caret) throw std::invalid_argument("bad");
            std::string rpart = tok.substr(caret + 1);
            f.r = std::stoll(rpart, &used);
            if (used != rpart.size()) throw std::invalid_argument("bad");
        } catch (const std::exception&) {
            throw std::invalid_argument("eta factor must look like 'd^r': '" + tok + "'");
        }
        if (f.d < 1) throw std::invalid_argument("eta argument multiplier must be positive");
        if (f.r == 0) throw std::invalid_argument("eta factor exponent must be nonzero");
        out.push_back(f);
    }
    if (out.empty()) throw std::invalid_argument("empty eta quotient specification");
    return out;
}

std::string eta_spec_str(const std::vector<EtaFactor>& factors) {
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << " ";
        os << factors[i].d << "^" << factors[i].r;
    }
    return os.str();
}

FracSeries eta_quotient(const std::vector<EtaFactor>& factors, const Rat& trunc) {
    Rat lead(0);
    for (const auto& f : factors) lead += rat(f.d * f.r, 24);
    Rat unit_trunc = trunc - lead;
    if (unit_trunc <= 0) {
        // Everything below trunc sits below the leading exponent: known zero.
        return FracSeries::zero(1, trunc);
    }
    FracSeries prod = FracSeries::one(unit_trunc);
    for (const auto& f : factors) prod = mul(prod, pow(euler_product(f.d, unit_trunc), f.r));
    return shift(prod, lead);
}

FracSeries eisenstein_e(int weight, long long dilation, const Rat& trunc) {
    if (weight != 4 && weight != 6)
        throw std::invalid_argument("eisenstein_e supports weights 4 and 6");
    if (dilation < 1) throw std::invalid_argument("eisenstein dilation must be positive");
    if (trunc <= 0) throw std::invalid_argument("eisenstein truncation must be positive");
    FracSeries e(1, trunc);
    e.set(rat(0), rat(1));
    Rat c = weight == 4 ? rat(240) : rat(-504);
    int p = weight - 1;
    for (long long n = 1; rat(dilation * n) < trunc; ++n)
        e.set(rat(dilation * n), c * sigma(n, p));
    return e;
}

DeltaNk make_delta(long long N, long long k, const FracSeries& newform) {
    if (N < 1 || k < 2 || k % 2 != 0)
        throw std::invalid_argument("make_delta needs N >= 1 and even k >= 2");
    FracSeries f = newform.grid() == 1 ? newform : coerce_integer_grid(newform);
    if (f.known_zero() || f.ord() != 1 || f.coeff(rat(1)) != 1)
        throw UnsupportedNormalization("newform must have leading term 1*q^1");
    long long h = k / 2;
    for (const auto& [e, c] : f.items()) {
        long long n = to_ll(e.get_num());
        if (((n % h) + h) % h != 1 % h)
            throw SupportViolation("newform coefficient at exponent " + rat_str(e) +
                                   " violates support on n == 1 (mod " + std::to_string(h) +
                                   ")");
    }
    FracSeries F = rescale(f, rat(2, k));
    FracSeries delta = coerce_integer_grid(pow(F, h));
    if (delta.known_zero() || delta.ord() < 1)
        throw UnsupportedNormalization("delta must vanish at the cusp");
    return DeltaNk(N, k, std::move(F), std::move(delta));
}

DeltaNk wrap_delta(long long N, long long k, const FracSeries& delta) {
    if (N < 1 || k < 2 || k % 2 != 0)
        throw std::invalid_argument("wrap_delta needs N >= 1 and even k >= 2");
    FracSeries d = delta.grid() == 1 ? delta : coerce_integer_grid(delta);
    if (d.known_zero() || d.ord() != 1 || d.coeff(rat(1)) != 1)
        throw UnsupportedNormalization("delta must have leading term 1*q^1");
    return DeltaNk(N, k, std::nullopt, std::move(d));
}

FracSeries ramanujan_serre(const DeltaNk& d, const FracSeries& f) {
    FracSeries logderiv = mul(theta(d.delta), invert(d.delta));
    return sub(scale(theta(f), rat(d.k, 4)), mul(f, logderiv));
}

std::complex<double> eval_series(const FracSeries& s, std::complex<double> tau,
                                 double tail_tol) {
    double y = tau.imag();
    if (!(y > 0)) throw std::invalid_argument("eval_series needs Im tau > 0");
    double big = 1.0;
    auto terms = s.items();
    std::size_t idx = 0, half = terms.size() / 2;
    for (const auto& [e, c] : terms) {
        if (idx++ < half) continue;
        big = std::max(big, std::abs(rat_double(c)));
    }
    double t = rat_double(s.trunc_order());
    double step = 2.0 * M_PI * y / static_cast<double>(s.grid());
    double tail = big * std::exp(-2.0 * M_PI * t * y) / (1.0 - std::exp(-step));
    if (!(tail <= tail_tol)) {
        std::ostringstream os;
        os << "discarded tail estimate " << tail << " exceeds tolerance " << tail_tol
           << " at Im tau = " << y << " (truncation order " << rat_str(s.trunc_order())
           << ")";
        throw TailTooLarge(os.str());
    }
    std::complex<double> acc(0.0, 0.0);
    const std::complex<double> two_pi_i_tau = std::complex<double>(0.0, 2.0 * M_PI) * tau;
    for (const auto& [e, c] : terms)
        acc += rat_double(c) * std::exp(two_pi_i_tau * rat_double(e));
    return acc;
}

Rat det(const GroupElement& g) { return g.a * g.d - g.b * g.c; }

GroupElement mul(const GroupElement& g, const GroupElement& h) {
    return GroupElement{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                        g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

GroupElement inverse(const GroupElement& g) {
    Rat dg = det(g);
    if (dg == 0) throw std::invalid_argument("singular group element");
    return GroupElement{g.d / dg, -g.b / dg, -g.c / dg, g.a / dg};
}

std::complex<double> moebius(const GroupElement& g, std::complex<double> tau) {
    std::complex<double> num = rat_double(g.a) * tau + rat_double(g.b);
    std::complex<double> den = rat_double(g.c) * tau + rat_double(g.d);
    return num / den;
}

bool is_integral(const GroupElement& g) {
    return is_integer(g.a) && is_integer(g.b) && is_integer(g.c) && is_integer(g.d);
}

bool in_congruence_group(const GroupElement& g, long long c_mod, long long b_mod) {
    if (!is_integral(g) || det(g) != 1) return false;
    if (c_mod > 1 && !is_integer(g.c / rat(c_mod))) return false;
    if (b_mod > 1 && !is_integer(g.b / rat(b_mod))) return false;
    return true;
}

std::vector<std::complex<double>> default_slash_samples() {
    return {{0.1, 0.9}, {-0.3, 1.1}, {0.5, 0.7}, {0.05, 1.3}, {-0.45, 0.85}};
}

SlashResult slash_check(const FracSeries& f, long long weight, const GroupElement& g,
                        const std::vector<std::complex<double>>& samples, double tail_tol) {
    if (samples.empty()) throw std::invalid_argument("slash_check needs sample points");
    Rat dg = det(g);
    if (dg <= 0) throw std::invalid_argument("slash_check needs det > 0");
    double det_factor = std::pow(rat_double(dg), static_cast<double>(weight) / 2.0);
    SlashResult out{{0.0, 0.0}, 0.0};
    bool first = true;
    for (const auto& tau : samples) {
        std::complex<double> den = rat_double(g.c) * tau + rat_double(g.d);
        std::complex<double> lhs =
            det_factor * std::pow(den, -static_cast<double>(weight)) *
            eval_series(f, moebius(g, tau), tail_tol);
        std::complex<double> ratio = lhs / eval_series(f, tau, tail_tol);
        if (first) {
            out.lambda = ratio;
            first = false;
        } else {
            out.max_deviation = std::max(out.max_deviation, std::abs(ratio - out.lambda));
        }
    }
    return out;
}

SlashResult slash_check(const FracSeries& f, long long weight, const GroupElement& g) {
    return slash_check(f, weight, g, default_slash_samples());
}

}  // namespace modparam
