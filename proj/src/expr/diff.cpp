#include <cmath>

#include "node.hpp"

namespace twoscale {

Expr diff(const Expr& e, Var v) {
    using K = Expr::Kind;
    if (!e.uses(v)) return Expr::number(0.0);
    switch (e.kind()) {
        case K::number:
        case K::pi:
            return Expr::number(0.0);
        case K::variable:
            return Expr::number(e.var() == v ? 1.0 : 0.0);
        case K::neg:
            return -diff(e.lhs(), v);
        case K::add:
            return diff(e.lhs(), v) + diff(e.rhs(), v);
        case K::sub:
            return diff(e.lhs(), v) - diff(e.rhs(), v);
        case K::mul: {
            const Expr a = e.lhs();
            const Expr b = e.rhs();
            return diff(a, v) * b + a * diff(b, v);
        }
        case K::div: {
            const Expr a = e.lhs();
            const Expr b = e.rhs();
            return diff(a, v) / b - a * diff(b, v) / pow(b, Expr::number(2.0));
        }
        case K::pow: {
            const Expr base = e.lhs();
            const Expr ex = e.rhs();
            if (ex.is_constant()) {
                const Expr lowered = ex - Expr::number(1.0);
                return ex * pow(base, lowered) * diff(base, v);
            }
            if (base.is_constant()) {
                const double b = base(0.0, 0.0, 0.0);
                if (!(b > 0.0)) throw DomainError("derivative of c^u needs c > 0, got " + base.str());
                const double lb = std::log(b);
                const Expr log_base = lb < 0.0 ? -Expr::number(-lb) : Expr::number(lb);
                return e * log_base * diff(ex, v);
            }
            throw DomainError("derivative of u^v with variable base and exponent is not expressible: " + e.str());
        }
        case K::sin:
            return cos(e.lhs()) * diff(e.lhs(), v);
        case K::cos:
            return -sin(e.lhs()) * diff(e.lhs(), v);
        case K::exp:
            return e * diff(e.lhs(), v);
    }
    return Expr::number(0.0);
}

Expr substitute(const Expr& e, Var v, const Expr& value) {
    if (!e.uses(v)) return e;
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::variable:
            return value;
        case K::neg:
        case K::sin:
        case K::cos:
        case K::exp:
            return Expr::make(e.kind(), substitute(e.lhs(), v, value));
        default:
            return Expr::make(e.kind(), substitute(e.lhs(), v, value), substitute(e.rhs(), v, value));
    }
}

}  // namespace twoscale
