#pragma once

#include "twoscale/expr.hpp"

namespace twoscale {

struct Expr::Node {
    Kind kind = Kind::number;
    double value = 0.0;
    Var var = Var::x;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    // Bit i set when Var(i) occurs in the subtree.
    unsigned vars = 0;
};

constexpr unsigned var_bit(Var v) noexcept { return 1u << static_cast<unsigned>(v); }

}  // namespace twoscale
