#ifndef EXODE_EVAL_HPP
#define EXODE_EVAL_HPP

#include <cmath>
#include <optional>

#include "errors.hpp"
#include "expr.hpp"

namespace exode {

/// A point of the jet space (t, y, y', y'') with an optional y''' for total-derivative checks.
struct JetPoint {
    double t = 0.0;
    double y = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    std::optional<double> y3;

    double operator[](Var v) const {
        switch (v) {
        case Var::T: return t;
        case Var::Y: return y;
        case Var::Y1: return y1;
        case Var::Y2: return y2;
        case Var::Y3:
            if (!y3) throw MissingVariable("expression mentions y''' but the point has no y3 component");
            return *y3;
        }
        return 0.0;
    }

    void set(Var v, double value) {
        switch (v) {
        case Var::T: t = value; break;
        case Var::Y: y = value; break;
        case Var::Y1: y1 = value; break;
        case Var::Y2: y2 = value; break;
        case Var::Y3: y3 = value; break;
        }
    }
};

namespace detail {

inline double eval_impl(const Expr &e, const JetPoint &p, double guard) {
    switch (e.kind()) {
    case Kind::Const: return to_double(e.value());
    case Kind::Var: return p[e.var()];
    case Kind::Sum: {
        double s = 0.0;
        for (const Expr &c : e.args()) s += eval_impl(c, p, guard);
        return s;
    }
    case Kind::Product: {
        double s = 1.0;
        for (const Expr &c : e.args()) s *= eval_impl(c, p, guard);
        return s;
    }
    case Kind::Power: {
        double b = eval_impl(e.base(), p, guard);
        const Rational &k = e.exponent();
        if (k < 0) {
            if (b == 0.0) throw DomainError("zero raised to a negative power");
            if (std::fabs(b) < guard) throw NearSingular("denominator below guard");
        }
        if (is_integer(k)) {
            return std::pow(b, to_double(k));
        }
        if (b < 0.0) throw DomainError("negative base with fractional exponent");
        return std::pow(b, to_double(k));
    }
    case Kind::Func: {
        double a = eval_impl(e.arg(), p, guard);
        switch (e.fn()) {
        case Fn::Exp: return std::exp(a);
        case Fn::Ln:
            if (a <= 0.0) throw DomainError("logarithm of a non-positive value");
            if (a < guard) throw NearSingular("logarithm argument below guard");
            return std::log(a);
        case Fn::Sin: return std::sin(a);
        case Fn::Cos: return std::cos(a);
        }
    }
    }
    return 0.0;
}

} // namespace detail

/// IEEE double evaluation. `guard` > 0 additionally rejects denominators and log arguments
/// smaller than it in magnitude (NearSingular).
inline double eval(const Expr &e, const JetPoint &p, double guard = 0.0) {
    double v = detail::eval_impl(e, p, guard);
    if (!std::isfinite(v)) throw DomainError("non-finite result");
    return v;
}

} // namespace exode

#endif
