#pragma once

// Scalar expressions such as "b^8-1", "3/2", "(b^8-1)/(b^8-b^4+1)" or "1.39".
// The symbol b denotes beta. Exponents must be integer literals.

#include <cctype>
#include <cstdio>
#include <string>

#include "projdim/scalar.hpp"

namespace projdim {

namespace detail {

template <ScalarField F>
class ExpressionParser {
public:
    using V = typename F::value_type;
    ExpressionParser(const F& field, const std::string& text) : f_(field), s_(text) {}

    V parse() {
        V v = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    V expr() {
        V v = term();
        for (;;) {
            skip();
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }
    V term() {
        V v = unary();
        for (;;) {
            skip();
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                V d = unary();
                if (f_.sign(d) == 0) fail(ErrorCode::DivisionByZero, "division by zero in '" + s_ + "'");
                v = v / d;
            } else {
                return v;
            }
        }
    }
    V unary() {
        skip();
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    V power() {
        V base = primary();
        skip();
        if (!eat('^')) return base;
        skip();
        bool negative = false;
        if (eat('-')) negative = true;
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) error("exponent must be an integer literal");
        long e = std::stol(s_.substr(start, pos_ - start));
        V result = f_.one();
        V b = base;
        for (long k = e; k > 0; k >>= 1) {
            if (k & 1) result = result * b;
            if (k > 1) b = b * b;
        }
        if (negative) {
            if (f_.sign(result) == 0) fail(ErrorCode::DivisionByZero, "negative power of zero in '" + s_ + "'");
            result = f_.one() / result;
        }
        return result;
    }
    V primary() {
        skip();
        if (eat('(')) {
            V v = expr();
            skip();
            if (!eat(')')) error("missing ')'");
            return v;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'b' || s_[pos_] == 'B')) {
            ++pos_;
            if (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) error("unknown symbol");
            return f_.beta();
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (start == pos_) error(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end");
        return f_.from_rational(parse_rational(s_.substr(start, pos_ - start)));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorCode::Parse, what + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
    }

    const F& f_;
    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

template <ScalarField F>
typename F::value_type parse_scalar(const F& field, const std::string& text) {
    return detail::ExpressionParser<F>(field, text).parse();
}

/// Canonical text: a polynomial in b with rational coefficients, or a rational.
inline std::string format_scalar(const ExactField&, const FieldElement& a) {
    if (a.context() == nullptr || a.context()->is_rational()) return projdim::to_string(a.is_zero() ? Rational(0) : a.coeffs()[0]);
    return Polynomial(a.coeffs()).to_string("b");
}

inline std::string format_scalar(const FloatField&, double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

}  // namespace projdim
