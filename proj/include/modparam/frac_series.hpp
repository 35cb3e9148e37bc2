#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "modparam/errors.hpp"
#include "modparam/rational.hpp"

namespace modparam {

// Truncated q-series with rational coefficients and exponents on the grid
// (1/w)Z. Exponents may be negative (poles at the cusp). trunc_order is the
// first exponent about which nothing is known: stored data covers exponents
// strictly below it, and every operation propagates truncation pessimistically
// (knowledge is never silently extended). Immutable in practice: operations
// return new values.
class FracSeries {
  public:
    FracSeries(long long grid_denominator, Rat trunc_order);

    static FracSeries zero(long long grid_denominator, const Rat& trunc_order);
    static FracSeries one(const Rat& trunc_order);
    static FracSeries monomial(const Rat& exponent, const Rat& coefficient, const Rat& trunc_order);

    long long grid() const { return w_; }
    const Rat& trunc_order() const { return trunc_; }

    // Least exponent carrying a nonzero coefficient; equals trunc_order for a
    // series with no known terms (its first possibly-nonzero term is unknown).
    Rat ord() const;
    bool known_zero() const { return c_.empty(); }
    std::size_t term_count() const { return c_.size(); }

    // Coefficient at exponent e; zero for on-grid e below trunc_order without
    // a stored term; throws for e at/above trunc_order (that knowledge does
    // not exist) and returns 0 for off-grid e below it.
    Rat coeff(const Rat& e) const;
    Rat coeff(long long integer_exponent) const;

    // Insert/overwrite a term. e must lie on the grid and below trunc_order.
    void set(const Rat& e, const Rat& coefficient);

    // exponent -> coefficient, exponents as reduced rationals (ascending).
    std::map<Rat, Rat> items() const;

    std::string str(int max_terms = 12) const;

    bool operator==(const FracSeries& other) const;
    bool operator!=(const FracSeries& other) const { return !(*this == other); }

    friend FracSeries add(const FracSeries& a, const FracSeries& b);
    friend FracSeries sub(const FracSeries& a, const FracSeries& b);
    friend FracSeries mul(const FracSeries& a, const FracSeries& b);
    friend FracSeries scale(const FracSeries& a, const Rat& factor);
    friend FracSeries shift(const FracSeries& a, const Rat& exponent_offset);
    friend FracSeries pow(const FracSeries& a, long long n);
    friend FracSeries invert(const FracSeries& a);
    friend FracSeries rescale(const FracSeries& a, const Rat& r);
    friend FracSeries theta(const FracSeries& a);
    friend FracSeries coerce_integer_grid(const FracSeries& a);
    friend FracSeries truncate(const FracSeries& a, const Rat& new_trunc);
    friend void write_series(std::ostream& os, const FracSeries& a);
    friend FracSeries read_series(std::istream& is);

  private:
    long long w_;                    // grid denominator (>= 1)
    Rat trunc_;                      // exponents < trunc_ are known
    std::map<long long, Rat> c_;     // exponent numerator on (1/w_)-grid -> nonzero coefficient

    Rat exp_of(long long key) const { return rat(key, w_); }
    static FracSeries regrid(const FracSeries& a, long long new_w);
};

FracSeries add(const FracSeries& a, const FracSeries& b);
FracSeries sub(const FracSeries& a, const FracSeries& b);
FracSeries mul(const FracSeries& a, const FracSeries& b);
FracSeries scale(const FracSeries& a, const Rat& factor);
FracSeries shift(const FracSeries& a, const Rat& exponent_offset);
FracSeries pow(const FracSeries& a, long long n);
FracSeries invert(const FracSeries& a);
FracSeries rescale(const FracSeries& a, const Rat& r);
FracSeries theta(const FracSeries& a);
FracSeries coerce_integer_grid(const FracSeries& a);
FracSeries truncate(const FracSeries& a, const Rat& new_trunc);

// Text format, line oriented:
//   w=<grid_denominator> trunc=<numerator>/<denominator>
//   <exp_num>/<exp_den> <coeff_num>/<coeff_den>
// Bit-exact round trip.
void write_series(std::ostream& os, const FracSeries& a);
FracSeries read_series(std::istream& is);
void write_series_file(const std::string& path, const FracSeries& a);
FracSeries read_series_file(const std::string& path);

}  // namespace modparam
