#pragma once

// Arbitrary precision integers and rationals (GMP backed).

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "projdim/errors.hpp"

namespace projdim {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Rational make_rational(long num, long den = 1) { return Rational(Integer(num), Integer(den)); }

/// Exact value of a finite double.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorCode::Parse, "non-finite value");
    return Rational(x);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const Integer& z) { return z.convert_to<double>(); }

inline int sign(const Rational& q) { return q.sign(); }
inline int sign(const Integer& z) { return z.sign(); }

inline Rational abs(const Rational& q) { return q.sign() < 0 ? Rational(-q) : q; }

/// "p/q" or "p"; accepts plain decimals such as "1.39" as exact rationals.
inline Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    if (s.empty()) fail(ErrorCode::Parse, "empty rational");
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Integer num(s.substr(0, slash));
            Integer den(s.substr(slash + 1));
            if (den == 0) fail(ErrorCode::Parse, "zero denominator in '" + text + "'");
            return Rational(num, den);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rational(Integer(s));
        bool negative = !s.empty() && s[0] == '-';
        std::string whole = s.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
        std::string frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Integer digits(whole + frac);
        Rational r(digits, scale);
        return negative ? Rational(-r) : r;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorCode::Parse, "malformed rational '" + text + "'");
    }
}

inline std::string to_string(const Rational& q) {
    if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
    return q.str();
}

/// 2^e as an exact rational (e may be negative).
inline Rational pow2(long e) {
    Integer one = 1;
    if (e >= 0) return Rational(Integer(one << static_cast<unsigned>(e)));
    return Rational(one, Integer(one << static_cast<unsigned>(-e)));
}

inline Rational pow(const Rational& base, unsigned e) {
    Rational result = 1;
    Rational b = base;
    while (e != 0) {
        if (e & 1U) result *= b;
        b *= b;
        e >>= 1U;
    }
    return result;
}

}  // namespace projdim
