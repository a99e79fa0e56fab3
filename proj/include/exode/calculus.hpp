#ifndef EXODE_CALCULUS_HPP
#define EXODE_CALCULUS_HPP

#include <vector>

#include "errors.hpp"
#include "simplify.hpp"

namespace exode {

namespace detail {

inline Expr partial_raw(const Expr &e, Var v) {
    if (!depends_on(e, v)) return Expr::num(0);
    switch (e.kind()) {
    case Kind::Const: return Expr::num(0);
    case Kind::Var: return Expr::num(e.var() == v ? 1 : 0);
    case Kind::Sum: {
        std::vector<Expr> terms;
        for (const Expr &t : e.args()) terms.push_back(partial_raw(t, v));
        return Expr::sum(std::move(terms));
    }
    case Kind::Product: {
        std::vector<Expr> terms;
        const auto &f = e.args();
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!depends_on(f[i], v)) continue;
            std::vector<Expr> factors = f;
            factors[i] = partial_raw(f[i], v);
            terms.push_back(Expr::product(std::move(factors)));
        }
        return Expr::sum(std::move(terms));
    }
    case Kind::Power: {
        const Rational &k = e.exponent();
        return Expr::product({Expr::num(k), Expr::power(e.base(), k - 1), partial_raw(e.base(), v)});
    }
    case Kind::Func: {
        Expr inner = partial_raw(e.arg(), v);
        switch (e.fn()) {
        case Fn::Exp: return Expr::product({e, inner});
        case Fn::Ln: return Expr::product({Expr::power(e.arg(), Rational(-1)), inner});
        case Fn::Sin: return Expr::product({Expr::func(Fn::Cos, e.arg()), inner});
        case Fn::Cos: return Expr::product({Expr::num(-1), Expr::func(Fn::Sin, e.arg()), inner});
        }
    }
    }
    return Expr::num(0);
}

} // namespace detail

/// Partial derivative treating the other jet variables as independent; simplified.
inline Expr partial(const Expr &e, Var v) { return simplify(detail::partial_raw(simplify(e), v)); }

/// d/dt along a solution: ∂t ψ + y'·∂y ψ + y''·∂y' ψ + y'''·∂y'' ψ.
inline Expr total_derivative(const Expr &psi) {
    if (depends_on(psi, Var::Y3)) throw ContainsY3();
    return simplify(Expr::sum({
        partial(psi, Var::T),
        Expr::product({Expr::var(Var::Y1), partial(psi, Var::Y)}),
        Expr::product({Expr::var(Var::Y2), partial(psi, Var::Y1)}),
        Expr::product({Expr::var(Var::Y3), partial(psi, Var::Y2)}),
    }));
}

struct Antiderivative {
    Expr result;
    bool supported = false;
};

namespace detail {

inline Antiderivative unsupported() { return {Expr::num(0), false}; }

// Splits `arg` as a*v + b with a, b free of v. Returns false if it is not linear in v.
inline bool linear_in(const Expr &arg, Var v, Expr &slope) {
    slope = partial(arg, v);
    if (depends_on(slope, v) || slope.is_zero()) return false;
    Expr offset = simplify(arg - slope * Expr::var(v));
    return !depends_on(offset, v);
}

// Antiderivative of a single factor that depends on v.
inline Antiderivative integrate_factor(const Expr &f, Var v) {
    const Expr x = Expr::var(v);
    if (f.is(Kind::Var)) return {simplify(Expr::product({Expr::num(Rational(1, 2)), Expr::power(x, Rational(2))})), true};
    if (f.is(Kind::Power) && f.base().is(Kind::Var)) {
        const Rational &k = f.exponent();
        if (k == -1) return {ln(x), true};
        return {simplify(Expr::product({Expr::num(Rational(1) / (k + 1)), Expr::power(x, k + 1)})), true};
    }
    if (f.is(Kind::Func) && f.fn() != Fn::Ln) {
        Expr a;
        if (!linear_in(f.arg(), v, a)) return unsupported();
        Expr inv = pow(a, Rational(-1));
        switch (f.fn()) {
        case Fn::Exp: return {f * inv, true};
        case Fn::Sin: return {-(cos(f.arg()) * inv), true};
        case Fn::Cos: return {sin(f.arg()) * inv, true};
        default: break;
        }
    }
    return unsupported();
}

inline Antiderivative integrate_term(const Expr &t, Var v) {
    std::vector<Expr> constant;
    std::vector<Expr> dependent;
    const std::vector<Expr> factors = t.is(Kind::Product) ? t.args() : std::vector<Expr>{t};
    for (const Expr &f : factors) {
        if (depends_on(f, v)) dependent.push_back(f);
        else constant.push_back(f);
    }
    Antiderivative inner;
    if (dependent.empty()) inner = {Expr::var(v), true};
    else if (dependent.size() == 1) inner = integrate_factor(dependent.front(), v);
    else return unsupported();
    if (!inner.supported) return inner;
    constant.push_back(inner.result);
    return {simplify(Expr::product(std::move(constant))), true};
}

} // namespace detail

/// Rule-table antiderivative in v: linearity, Laurent monomials (v^-1 -> ln v), and
/// exp/sin/cos of arguments linear in v. Anything else is reported unsupported.
inline Antiderivative antiderivative(const Expr &e, Var v) {
    Expr s = simplify(e);
    if (s.is_zero()) return {Expr::num(0), true};
    if (!s.is(Kind::Sum)) return detail::integrate_term(s, v);
    std::vector<Expr> parts;
    for (const Expr &t : s.args()) {
        Antiderivative a = detail::integrate_term(t, v);
        if (!a.supported) return a;
        parts.push_back(a.result);
    }
    return {simplify(Expr::sum(std::move(parts))), true};
}

/// ∫_lo^hi e dv = A(hi) - A(lo). Throws UnsupportedIntegrand outside the rule table.
inline Expr definite_integral(const Expr &e, Var v, const Expr &lo, const Expr &hi) {
    if (lo == hi) return Expr::num(0);
    Antiderivative a = antiderivative(e, v);
    if (!a.supported) throw UnsupportedIntegrand("no rule for integrand " + print(simplify(e)) + " in " + std::string(var_name(v)));
    return substitute(a.result, v, hi) - substitute(a.result, v, lo);
}

} // namespace exode

#endif
