// Recursive-descent parser for the expression grammar:
//
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | identifier '(' sum ')' | '(' sum ')'

#include <cctype>
#include <charconv>
#include <string>

#include "node.hpp"

namespace twoscale {

namespace {

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        skip_space();
        if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
        Expr e = sum();
        skip_space();
        if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

  private:
    static Expr raw(Expr::Kind k, const Expr& a, const Expr& b) { return Expr::make(k, a, b); }
    static Expr raw_unary(Expr::Kind k, const Expr& a) { return Expr::make(k, a); }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    Expr sum() {
        Expr e = product();
        for (;;) {
            if (accept('+'))
                e = raw(Expr::Kind::add, e, product());
            else if (accept('-'))
                e = raw(Expr::Kind::sub, e, product());
            else
                return e;
        }
    }

    Expr product() {
        Expr e = unary();
        for (;;) {
            if (accept('*'))
                e = raw(Expr::Kind::mul, e, unary());
            else if (accept('/'))
                e = raw(Expr::Kind::div, e, unary());
            else
                return e;
        }
    }

    Expr unary() {
        if (accept('-')) return raw_unary(Expr::Kind::neg, unary());
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return raw(Expr::Kind::pow, base, unary());
        return base;
    }

    Expr primary() {
        skip_space();
        if (pos_ == src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            expect_close();
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (starts_with("τ")) {
            pos_ += 2;
            return Expr::variable(Var::tau);
        }
        if (starts_with("π")) {
            pos_ += 2;
            return Expr::pi();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    void expect_close() {
        skip_space();
        if (pos_ == src_.size()) throw ParseError("expected ')' but reached end of input", pos_);
        if (src_[pos_] != ')') throw ParseError(std::string("expected ')' but found '") + src_[pos_] + "'", pos_);
        ++pos_;
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        // Exponent only when followed by a digit, so "2e" is not swallowed.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                digits();
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
            throw ParseError("malformed number '" + std::string(src_.substr(start, pos_ - start)) + "'", start);
        return Expr::number(value);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return Expr::variable(Var::x);
        if (name == "t") return Expr::variable(Var::t);
        if (name == "tau") return Expr::variable(Var::tau);
        if (name == "pi") return Expr::pi();
        Expr::Kind fn;
        if (name == "sin")
            fn = Expr::Kind::sin;
        else if (name == "cos")
            fn = Expr::Kind::cos;
        else if (name == "exp")
            fn = Expr::Kind::exp;
        else
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
        Expr arg = sum();
        expect_close();
        return raw_unary(fn, arg);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).run(); }

}  // namespace twoscale
