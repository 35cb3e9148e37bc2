#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modparam {

// Exact rational arithmetic built on GMP. All exact-path values in the
// library are mpq_class; floating point never enters series arithmetic.
using Rat = mpq_class;

inline Rat rat(long long n, long long d = 1) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(static_cast<long>(n), static_cast<long>(d));
    r.canonicalize();
    return r;
}

// Parses "num", "num/den" (optional leading sign). Decimal or scientific
// notation is rejected: exact paths must receive exact input.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos)
        throw std::invalid_argument("decimal input rejected on exact path: '" + s + "'");
    std::size_t slash = s.find('/');
    auto check_int = [](const std::string& t, bool sign_ok) {
        if (t.empty()) return false;
        std::size_t i = 0;
        if (sign_ok && (t[0] == '+' || t[0] == '-')) i = 1;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!check_int(num, true) || !check_int(den, false))
        throw std::invalid_argument("malformed rational literal: '" + s + "'");
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0)
        throw std::invalid_argument("malformed rational literal: '" + s + "'");
    if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0)
        throw std::invalid_argument("rational with zero denominator: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) {
    std::string s = r.get_num().get_str();
    if (r.get_den() != 1) s += "/" + r.get_den().get_str();
    return s;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline mpz_class rat_floor(const Rat& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline mpz_class rat_ceil(const Rat& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline double rat_double(const Rat& r) { return r.get_d(); }

inline long long to_ll(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer too large for machine word");
    return z.get_si();
}

}  // namespace modparam
