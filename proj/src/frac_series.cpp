#include "modparam/frac_series.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

namespace modparam {

namespace {

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

// Largest integer key k with k/w < bound, i.e. k < bound*w.
long long last_key_below(const Rat& bound, long long w) {
    Rat kb = bound * rat(w);
    mpz_class c = rat_ceil(kb);
    // k < kb: last key is ceil(kb)-1 (works for integral kb too).
    return to_ll(c) - 1;
}

}  // namespace

FracSeries::FracSeries(long long grid_denominator, Rat trunc_order)
    : w_(grid_denominator), trunc_(std::move(trunc_order)) {
    if (w_ < 1) throw std::invalid_argument("grid denominator must be positive");
}

FracSeries FracSeries::zero(long long grid_denominator, const Rat& trunc_order) {
    return FracSeries(grid_denominator, trunc_order);
}

FracSeries FracSeries::one(const Rat& trunc_order) {
    if (trunc_order <= 0)
        throw std::invalid_argument("constant series needs truncation order > 0");
    FracSeries s(1, trunc_order);
    s.c_[0] = 1;
    return s;
}

FracSeries FracSeries::monomial(const Rat& exponent, const Rat& coefficient,
                                const Rat& trunc_order) {
    if (exponent >= trunc_order)
        throw std::invalid_argument("monomial exponent at or above truncation order");
    FracSeries s(to_ll(exponent.get_den()), trunc_order);
    s.set(exponent, coefficient);
    return s;
}

Rat FracSeries::ord() const {
    if (c_.empty()) return trunc_;
    return exp_of(c_.begin()->first);
}

Rat FracSeries::coeff(const Rat& e) const {
    if (e >= trunc_)
        throw std::out_of_range("coefficient at exponent " + rat_str(e) +
                                " is beyond truncation order " + rat_str(trunc_));
    Rat key = e * rat(w_);
    if (!is_integer(key)) return Rat(0);
    auto it = c_.find(to_ll(key.get_num()));
    return it == c_.end() ? Rat(0) : it->second;
}

Rat FracSeries::coeff(long long integer_exponent) const { return coeff(rat(integer_exponent)); }

void FracSeries::set(const Rat& e, const Rat& coefficient) {
    if (e >= trunc_)
        throw std::invalid_argument("term exponent at or above truncation order");
    Rat key = e * rat(w_);
    if (!is_integer(key))
        throw OffGridExponent("exponent " + rat_str(e) + " is off the 1/" +
                              std::to_string(w_) + " grid");
    long long k = to_ll(key.get_num());
    if (coefficient == 0)
        c_.erase(k);
    else
        c_[k] = coefficient;
}

std::map<Rat, Rat> FracSeries::items() const {
    std::map<Rat, Rat> out;
    for (const auto& [k, v] : c_) out.emplace(exp_of(k), v);
    return out;
}

std::string FracSeries::str(int max_terms) const {
    std::ostringstream os;
    int shown = 0;
    for (const auto& [k, v] : c_) {
        if (shown == max_terms) {
            os << "... + ";
            break;
        }
        if (shown > 0) os << " + ";
        os << rat_str(v) << "*q^(" << rat_str(exp_of(k)) << ")";
        ++shown;
    }
    if (shown == 0) os << "0 ";
    else os << " ";
    os << "+ O(q^(" << rat_str(trunc_) << "))";
    return os.str();
}

bool FracSeries::operator==(const FracSeries& other) const {
    return trunc_ == other.trunc_ && items() == other.items();
}

FracSeries FracSeries::regrid(const FracSeries& a, long long new_w) {
    if (new_w == a.w_) return a;
    if (new_w % a.w_ != 0) throw std::invalid_argument("regrid target must refine grid");
    long long f = new_w / a.w_;
    FracSeries out(new_w, a.trunc_);
    for (const auto& [k, v] : a.c_) out.c_[k * f] = v;
    return out;
}

FracSeries add(const FracSeries& a, const FracSeries& b) {
    long long w = lcm_ll(a.w_, b.w_);
    FracSeries aa = FracSeries::regrid(a, w), bb = FracSeries::regrid(b, w);
    FracSeries out(w, std::min(a.trunc_, b.trunc_));
    for (const auto& [k, v] : aa.c_)
        if (aa.exp_of(k) < out.trunc_) out.c_[k] = v;
    for (const auto& [k, v] : bb.c_) {
        if (bb.exp_of(k) >= out.trunc_) continue;
        auto [it, fresh] = out.c_.emplace(k, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) out.c_.erase(it);
        }
    }
    return out;
}

FracSeries sub(const FracSeries& a, const FracSeries& b) { return add(a, scale(b, rat(-1))); }

FracSeries mul(const FracSeries& a, const FracSeries& b) {
    long long w = lcm_ll(a.w_, b.w_);
    FracSeries aa = FracSeries::regrid(a, w), bb = FracSeries::regrid(b, w);
    // Unknown tail of one factor meets the lowest term of the other:
    // everything below min(ta + ord(b), tb + ord(a)) is determined.
    Rat tr = std::min(a.trunc_ + b.ord(), b.trunc_ + a.ord());
    FracSeries out(w, tr);
    long long kmax = last_key_below(tr, w);
    for (const auto& [ka, va] : aa.c_) {
        for (const auto& [kb, vb] : bb.c_) {
            long long k = ka + kb;
            if (k > kmax) break;
            auto [it, fresh] = out.c_.emplace(k, va * vb);
            if (!fresh) it->second += va * vb;
        }
    }
    for (auto it = out.c_.begin(); it != out.c_.end();)
        it = it->second == 0 ? out.c_.erase(it) : std::next(it);
    return out;
}

FracSeries scale(const FracSeries& a, const Rat& factor) {
    FracSeries out(a.w_, a.trunc_);
    if (factor == 0) return out;
    for (const auto& [k, v] : a.c_) out.c_[k] = v * factor;
    return out;
}

FracSeries shift(const FracSeries& a, const Rat& exponent_offset) {
    long long w = lcm_ll(a.w_, to_ll(exponent_offset.get_den()));
    FracSeries aa = FracSeries::regrid(a, w);
    long long dk = to_ll(Rat(exponent_offset * rat(w)).get_num());
    FracSeries out(w, a.trunc_ + exponent_offset);
    for (const auto& [k, v] : aa.c_) out.c_[k + dk] = v;
    return out;
}

FracSeries pow(const FracSeries& a, long long n) {
    if (n < 0) return pow(invert(a), -n);
    if (n == 0) {
        FracSeries out(1, a.trunc_);
        if (a.trunc_ > 0) out.c_[0] = 1;
        return out;
    }
    FracSeries out = a;
    for (long long i = 1; i < n; ++i) out = mul(out, a);
    return out;
}

FracSeries invert(const FracSeries& a) {
    if (a.c_.empty())
        throw ZeroSeriesInverted("inverting a series with no known nonzero term");
    long long vkey = a.c_.begin()->first;
    Rat lead = a.c_.begin()->second;
    Rat v = a.exp_of(vkey);
    // a = lead * q^v * u with u = 1 + (positive-order part); u is known below
    // trunc - v, and so is u^{-1}; dividing by lead*q^v costs another v.
    Rat unit_trunc = a.trunc_ - v;
    long long kmax = last_key_below(unit_trunc, a.w_);
    std::vector<Rat> u(static_cast<std::size_t>(kmax + 1), Rat(0));
    for (const auto& [k, c] : a.c_) {
        long long j = k - vkey;
        if (j <= kmax) u[static_cast<std::size_t>(j)] = c / lead;
    }
    std::vector<Rat> y(static_cast<std::size_t>(kmax + 1), Rat(0));
    y[0] = 1;
    for (long long k = 1; k <= kmax; ++k) {
        Rat acc(0);
        for (long long j = 1; j <= k; ++j)
            if (u[static_cast<std::size_t>(j)] != 0)
                acc += u[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k - j)];
        y[static_cast<std::size_t>(k)] = -acc;
    }
    FracSeries out(a.w_, a.trunc_ - 2 * v);
    for (long long k = 0; k <= kmax; ++k) {
        if (y[static_cast<std::size_t>(k)] == 0) continue;
        long long key = k - vkey;
        if (out.exp_of(key) < out.trunc_) out.c_[key] = y[static_cast<std::size_t>(k)] / lead;
    }
    return out;
}

FracSeries rescale(const FracSeries& a, const Rat& r) {
    if (r <= 0) throw std::invalid_argument("rescale factor must be positive");
    long long rn = to_ll(r.get_num()), rd = to_ll(r.get_den());
    long long w = a.w_ * rd;
    std::vector<std::pair<long long, Rat>> terms;
    terms.reserve(a.c_.size());
    long long g = w;
    for (const auto& [k, v] : a.c_) {
        long long nk = k * rn;
        terms.emplace_back(nk, v);
        g = std::gcd(g, nk < 0 ? -nk : nk);
    }
    if (g == 0) g = w;
    FracSeries out(w / g, a.trunc_ * r);
    for (auto& [k, v] : terms) out.c_[k / g] = std::move(v);
    return out;
}

FracSeries theta(const FracSeries& a) {
    FracSeries out(a.w_, a.trunc_);
    for (const auto& [k, v] : a.c_) {
        if (k == 0) continue;
        out.c_[k] = v * a.exp_of(k);
    }
    return out;
}

FracSeries coerce_integer_grid(const FracSeries& a) {
    FracSeries out(1, Rat(rat_ceil(a.trunc_)));
    for (const auto& [k, v] : a.c_) {
        if (k % a.w_ != 0)
            throw NonIntegerExponents("series has a term at non-integer exponent " +
                                      rat_str(a.exp_of(k)));
        out.c_[k / a.w_] = v;
    }
    return out;
}

FracSeries truncate(const FracSeries& a, const Rat& new_trunc) {
    if (new_trunc > a.trunc_)
        throw std::invalid_argument("cannot raise truncation order of a series");
    FracSeries out(a.w_, new_trunc);
    for (const auto& [k, v] : a.c_) {
        if (a.exp_of(k) >= new_trunc) break;
        out.c_[k] = v;
    }
    return out;
}

void write_series(std::ostream& os, const FracSeries& a) {
    os << "w=" << a.w_ << " trunc=" << a.trunc_.get_num().get_str() << "/"
       << a.trunc_.get_den().get_str() << "\n";
    for (const auto& [k, v] : a.c_) {
        Rat e = a.exp_of(k);
        os << e.get_num().get_str() << "/" << e.get_den().get_str() << " "
           << v.get_num().get_str() << "/" << v.get_den().get_str() << "\n";
    }
}

FracSeries read_series(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty series input");
    std::istringstream head(line);
    std::string wtok, ttok;
    if (!(head >> wtok >> ttok) || wtok.rfind("w=", 0) != 0 || ttok.rfind("trunc=", 0) != 0)
        throw std::invalid_argument("series header must be 'w=<w> trunc=<num>/<den>'");
    std::string extra;
    if (head >> extra) throw std::invalid_argument("trailing tokens in series header");
    long long w = 0;
    try {
        std::size_t used = 0;
        w = std::stoll(wtok.substr(2), &used);
        if (used != wtok.size() - 2) throw std::invalid_argument("bad");
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed grid denominator in series header");
    }
    Rat trunc = parse_rat(ttok.substr(6));
    FracSeries out(w, trunc);
    long long prev_key = 0;
    bool have_prev = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string etok, ctok;
        if (!(ls >> etok >> ctok) || (ls >> extra))
            throw std::invalid_argument("series term line must be '<exp> <coeff>'");
        Rat e = parse_rat(etok);
        Rat c = parse_rat(ctok);
        Rat key = e * rat(w);
        if (!is_integer(key))
            throw OffGridExponent("series term exponent " + etok + " off the 1/" +
                                  std::to_string(w) + " grid");
        if (e >= trunc)
            throw std::invalid_argument("series term at or above truncation order");
        if (c == 0) throw std::invalid_argument("explicit zero coefficient in series file");
        long long k = to_ll(key.get_num());
        if (have_prev && k <= prev_key)
            throw std::invalid_argument("series term exponents must strictly increase");
        prev_key = k;
        have_prev = true;
        out.c_[k] = c;
    }
    return out;
}

void write_series_file(const std::string& path, const FracSeries& a) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_series(os, a);
}

FracSeries read_series_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_series(is);
}

}  // namespace modparam
