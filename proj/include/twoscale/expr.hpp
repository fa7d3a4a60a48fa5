#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "twoscale/errors.hpp"

namespace twoscale {

enum class Var { x, t, tau };

/// Immutable scalar expression in the variables x, t and tau.
///
/// Grammar (highest precedence first): `^` (right associative), unary minus,
/// `*` `/`, `+` `-` (left associative). Atoms are decimal literals, the
/// variables `x`, `t`, `tau` (or `τ`), the constant `pi` (or `π`) and calls
/// of `sin`, `cos`, `exp`. Copies share the underlying tree.
class Expr {
  public:
    enum class Kind { number, variable, pi, neg, add, sub, mul, div, pow, sin, cos, exp };

    struct Node;

    /// Zero constant.
    Expr();

    static Expr number(double value);
    /// Node constructor without folding (the parser builds trees with it).
    static Expr make(Kind kind, Expr lhs, Expr rhs = {});
    static Expr variable(Var v);
    static Expr pi();

    Kind kind() const noexcept;
    /// Literal value; only meaningful for Kind::number.
    double value() const noexcept;
    Var var() const noexcept;
    /// Operands: lhs for unary nodes and calls, lhs/rhs for binary nodes.
    Expr lhs() const;
    Expr rhs() const;

    double operator()(double x, double t, double tau) const;

    bool uses(Var v) const noexcept;
    bool is_constant() const noexcept { return !uses(Var::x) && !uses(Var::t) && !uses(Var::tau); }
    /// True when the tree is the literal 0 (not merely zero-valued).
    bool is_zero_literal() const noexcept;

    std::string str() const;

    /// Structural equality (same tree shape, same literals bit for bit).
    friend bool same_tree(const Expr& a, const Expr& b) noexcept;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& base, const Expr& exponent);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr exp(const Expr& a);

  private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

Expr parse(std::string_view source);

double eval(const Expr& e, double x, double t, double tau);

/// Exact symbolic derivative. Output is lightly folded (0 and 1 identities)
/// but carries no canonical form.
Expr diff(const Expr& e, Var v);

/// Replaces every occurrence of variable v by `value`.
Expr substitute(const Expr& e, Var v, const Expr& value);

/// Parses a variable-free expression and returns its value ("pi/2", "1e-3").
double eval_constant(std::string_view source);

std::string_view var_name(Var v) noexcept;

}  // namespace twoscale
