#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "pnrec/graded/polynomial.hpp"

namespace pnrec {

namespace detail {

// expr    := term (('+' | '-') term)*
// term    := unary ('*' unary)*
// unary   := '-' unary | '+' unary | power
// power   := primary ('^' integer)?
// primary := integer ('/' integer)? | identifier | '(' expr ')'
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, TablePtr table) : text_(text), table_(std::move(table)) {}

    Polynomial parse() {
        skip_ws();
        if (at_end()) throw ParseError("empty expression", pos_);
        Polynomial p = expr();
        skip_ws();
        if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return p;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        Polynomial acc = term();
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    Polynomial term() {
        Polynomial acc = unary();
        while (accept('*')) acc = acc * unary();
        return acc;
    }

    Polynomial unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Polynomial power() {
        skip_ws();
        std::size_t start = pos_;
        bool single_odd = false;
        Polynomial base = primary(single_odd);
        if (accept('^')) {
            skip_ws();
            std::size_t exp_pos = pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("exponent must be a nonnegative integer", exp_pos);
            std::string digits = integer();
            unsigned long e = std::stoul(digits);
            if (single_odd && e >= 2) throw ParseError("odd variable raised to power >= 2", start);
            return pnrec::power(base, static_cast<unsigned>(e));
        }
        return base;
    }

    std::string integer() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Polynomial primary(bool& single_odd) {
        skip_ws();
        std::size_t start = pos_;
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = integer();
            skip_ws();
            if (peek() == '/') {
                ++pos_;
                skip_ws();
                std::size_t den_pos = pos_;
                if (!std::isdigit(static_cast<unsigned char>(peek())))
                    throw ParseError("expected integer denominator", den_pos);
                std::string den = integer();
                Rational d(den);
                if (d == 0) throw ParseError("zero denominator", den_pos);
                Rational r{mpz_class(num), mpz_class(den)};
                r.canonicalize();
                return Polynomial::constant(table_, r);
            }
            return Polynomial::constant(table_, Rational(mpz_class(num)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            auto idx = table_->find(name);
            if (!idx) throw UnknownVariable(name);
            single_odd = table_->odd(*idx);
            return Polynomial::variable(table_, *idx);
        }
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (at_end()) throw ParseError("unexpected end of input", pos_);
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    std::string_view text_;
    TablePtr table_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse an expression such as "3/2*q1^2*t1 - th2*th1" into a normalized polynomial.
inline Polynomial parse_expression(std::string_view text, const TablePtr& table) {
    return detail::ExpressionParser(text, table).parse();
}

}  // namespace pnrec
