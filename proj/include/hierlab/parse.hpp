#pragma once

// Tiny expression parser; keeps frozen symbolic reference vectors readable in
// the verification suites and tests.
// Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := primary ('^' nat)?; primary := nat('/'nat)? | 'i' | 'tau' |
// 'tau0' | name primes* | '(' expr ')'. Derivatives are primes: u''''.

#include "hierlab/diffpoly.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace hierlab {

class PolyParser {
public:
    explicit PolyParser(std::string s) : s_(std::move(s)) {}

    DiffPoly parse() {
        DiffPoly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return p;
    }

private:
    std::string s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("parse error at " + std::to_string(pos_) + " in '" + s_ + "': " + what);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    DiffPoly expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        DiffPoly acc = term();
        if (neg) acc = -acc;
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    DiffPoly term() {
        DiffPoly acc = factor();
        while (eat('*')) acc *= factor();
        return acc;
    }

    DiffPoly factor() {
        DiffPoly base = primary();
        if (eat('^')) {
            long n = integer();
            if (n < 0) fail("negative power");
            return pow(base, static_cast<int>(n));
        }
        return base;
    }

    long integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::stol(s_.substr(start, pos_ - start));
    }

    DiffPoly primary() {
        skip_ws();
        if (eat('(')) {
            DiffPoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long num = integer();
            if (eat('/')) {
                long den = integer();
                return DiffPoly(Coeff(GaussianRational(Rational(num, den))));
            }
            return DiffPoly(Coeff(GaussianRational(Rational(num))));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "i") return DiffPoly(coeff_i());
            if (name == "tau") return DiffPoly(coeff_tau(1));
            if (name == "tau0") return DiffPoly(Coeff::monomial({0, 1}, GaussianRational(1)));
            int order = 0;
            while (pos_ < s_.size() && s_[pos_] == '\'') {
                ++order;
                ++pos_;
            }
            return DiffPoly::variable(var(name), order);
        }
        fail("unexpected character");
    }
};

inline DiffPoly P(const std::string& s) { return PolyParser(s).parse(); }

}  // namespace hierlab
