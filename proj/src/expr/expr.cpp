#include "twoscale/expr.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "node.hpp"

namespace twoscale {

namespace {

bool is_binary(Expr::Kind k) {
    using K = Expr::Kind;
    return k == K::add || k == K::sub || k == K::mul || k == K::div || k == K::pow;
}

double checked(double v, const char* op) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + op);
    return v;
}

double evaluate(const Expr::Node& n, const std::array<double, 3>& at) {
    using K = Expr::Kind;
    switch (n.kind) {
        case K::number:
            return n.value;
        case K::variable:
            return at[static_cast<std::size_t>(n.var)];
        case K::pi:
            return std::numbers::pi;
        case K::neg:
            return -evaluate(*n.lhs, at);
        case K::add:
            return checked(evaluate(*n.lhs, at) + evaluate(*n.rhs, at), "+");
        case K::sub:
            return checked(evaluate(*n.lhs, at) - evaluate(*n.rhs, at), "-");
        case K::mul:
            return checked(evaluate(*n.lhs, at) * evaluate(*n.rhs, at), "*");
        case K::div: {
            const double num = evaluate(*n.lhs, at);
            const double den = evaluate(*n.rhs, at);
            if (den == 0.0) throw EvalError("division by zero");
            return checked(num / den, "/");
        }
        case K::pow: {
            const double base = evaluate(*n.lhs, at);
            const double ex = evaluate(*n.rhs, at);
            if (base == 0.0 && ex < 0.0) throw EvalError("zero raised to a negative power");
            return checked(std::pow(base, ex), "^");
        }
        case K::sin:
            return checked(std::sin(evaluate(*n.lhs, at)), "sin");
        case K::cos:
            return checked(std::cos(evaluate(*n.lhs, at)), "cos");
        case K::exp:
            return checked(std::exp(evaluate(*n.lhs, at)), "exp");
    }
    return 0.0;
}

int precedence(Expr::Kind k) {
    using K = Expr::Kind;
    switch (k) {
        case K::add:
        case K::sub:
            return 1;
        case K::mul:
        case K::div:
            return 2;
        case K::neg:
            return 3;
        case K::pow:
            return 4;
        default:
            return 5;
    }
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
    using K = Expr::Kind;
    const K k = e.kind();
    switch (k) {
        case K::number:
            out += format_number(e.value());
            return;
        case K::variable:
            out += var_name(e.var());
            return;
        case K::pi:
            out += "pi";
            return;
        case K::neg:
            out += '-';
            print_child(e.lhs(), precedence(e.lhs().kind()) < precedence(K::neg), out);
            return;
        case K::sin:
        case K::cos:
        case K::exp:
            out += k == K::sin ? "sin" : k == K::cos ? "cos" : "exp";
            print_child(e.lhs(), true, out);
            return;
        default:
            break;
    }
    const int p = precedence(k);
    const int pl = precedence(e.lhs().kind());
    const int pr = precedence(e.rhs().kind());
    const bool right_assoc = k == K::pow;
    print_child(e.lhs(), pl < p || (right_assoc && pl == p), out);
    switch (k) {
        case K::add: out += '+'; break;
        case K::sub: out += '-'; break;
        case K::mul: out += '*'; break;
        case K::div: out += '/'; break;
        default: out += '^'; break;
    }
    print_child(e.rhs(), pr < p || (!right_assoc && pr == p), out);
}

bool is_literal(const Expr& e, double v) { return e.kind() == Expr::Kind::number && e.value() == v; }

// Folded literal; negative results become neg(number) so the tree stays printable.
Expr folded(double v) {
    if (v < 0.0) return -Expr::number(-v);
    return Expr::number(v);
}

bool both_numbers(const Expr& a, const Expr& b) {
    return a.kind() == Expr::Kind::number && b.kind() == Expr::Kind::number;
}

}  // namespace

std::string_view var_name(Var v) noexcept {
    switch (v) {
        case Var::x: return "x";
        case Var::t: return "t";
        case Var::tau: return "tau";
    }
    return "?";
}

Expr::Expr() {
    static const auto zero = std::make_shared<const Node>();
    node_ = zero;
}

Expr Expr::number(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->var = v;
    n->vars = var_bit(v);
    return Expr(std::move(n));
}

Expr Expr::pi() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::pi;
    return Expr(std::move(n));
}

Expr Expr::make(Kind kind, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->vars = lhs.node_->vars | (is_binary(kind) ? rhs.node_->vars : 0u);
    n->lhs = std::move(lhs.node_);
    if (is_binary(kind)) n->rhs = std::move(rhs.node_);
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
Var Expr::var() const noexcept { return node_->var; }
Expr Expr::lhs() const { return node_->lhs ? Expr(node_->lhs) : Expr(); }
Expr Expr::rhs() const { return node_->rhs ? Expr(node_->rhs) : Expr(); }

double Expr::operator()(double x, double t, double tau) const { return evaluate(*node_, {x, t, tau}); }

bool Expr::uses(Var v) const noexcept { return (node_->vars & var_bit(v)) != 0; }

bool Expr::is_zero_literal() const noexcept { return is_literal(*this, 0.0); }

std::string Expr::str() const {
    std::string out;
    print(*this, out);
    return out;
}

bool same_tree(const Expr& a, const Expr& b) noexcept {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Expr::Kind::number:
            return std::bit_cast<std::uint64_t>(a.value()) == std::bit_cast<std::uint64_t>(b.value());
        case Expr::Kind::variable:
            return a.var() == b.var();
        case Expr::Kind::pi:
            return true;
        default:
            break;
    }
    if (!same_tree(a.lhs(), b.lhs())) return false;
    return !is_binary(a.kind()) || same_tree(a.rhs(), b.rhs());
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero_literal()) return b;
    if (b.is_zero_literal()) return a;
    if (both_numbers(a, b)) return folded(a.value() + b.value());
    return Expr::make(Expr::Kind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_zero_literal()) return a;
    if (a.is_zero_literal()) return -b;
    if (both_numbers(a, b)) return folded(a.value() - b.value());
    return Expr::make(Expr::Kind::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero_literal() || b.is_zero_literal()) return Expr::number(0.0);
    if (is_literal(a, 1.0)) return b;
    if (is_literal(b, 1.0)) return a;
    if (both_numbers(a, b)) return folded(a.value() * b.value());
    return Expr::make(Expr::Kind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_zero_literal() && !b.is_zero_literal()) return Expr::number(0.0);
    if (is_literal(b, 1.0)) return a;
    return Expr::make(Expr::Kind::div, a, b);
}

Expr operator-(const Expr& a) {
    if (a.is_zero_literal()) return a;
    return Expr::make(Expr::Kind::neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
    if (exponent.is_zero_literal()) return Expr::number(1.0);
    if (is_literal(exponent, 1.0)) return base;
    return Expr::make(Expr::Kind::pow, base, exponent);
}

Expr sin(const Expr& a) { return Expr::make(Expr::Kind::sin, a); }
Expr cos(const Expr& a) { return Expr::make(Expr::Kind::cos, a); }
Expr exp(const Expr& a) { return Expr::make(Expr::Kind::exp, a); }

double eval(const Expr& e, double x, double t, double tau) {
    if (!std::isfinite(x) || !std::isfinite(t) || !std::isfinite(tau)) throw EvalError("non-finite binding");
    return e(x, t, tau);
}

double eval_constant(std::string_view source) {
    const Expr e = parse(source);
    if (!e.is_constant()) throw DomainError("expected a constant expression, got '" + std::string(source) + "'");
    return e(0.0, 0.0, 0.0);
}

}  // namespace twoscale
