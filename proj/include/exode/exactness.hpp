#ifndef EXODE_EXACTNESS_HPP
#define EXODE_EXACTNESS_HPP

#include <array>
#include <string>
#include <string_view>

#include "calculus.hpp"
#include "errors.hpp"
#include "sampler.hpp"

namespace exode {

/// F3·y''' + F2·y'' + F1·y' + F0 = 0 with coefficients over (t, y, y', y'').
class Equation {
public:
    Equation(Expr f3, Expr f2, Expr f1, Expr f0)
        : f3_(simplify(f3)), f2_(simplify(f2)), f1_(simplify(f1)), f0_(simplify(f0)) {
        for (const Expr *f : {&f3_, &f2_, &f1_, &f0_})
            if (depends_on(*f, Var::Y3)) throw InvalidEquation("coefficients must not depend on y'''");
        if (f3_.is_zero()) throw InvalidEquation("coefficient of y''' is identically zero");
    }

    /// Also rejects an F3 that the sampler finds identically zero.
    static Equation checked(Expr f3, Expr f2, Expr f1, Expr f0, Sampler &s) {
        Equation eq(std::move(f3), std::move(f2), std::move(f1), std::move(f0));
        if (is_zero(eq.f3(), s)) throw InvalidEquation("coefficient of y''' is identically zero");
        return eq;
    }

    const Expr &f3() const { return f3_; }
    const Expr &f2() const { return f2_; }
    const Expr &f1() const { return f1_; }
    const Expr &f0() const { return f0_; }

    /// Coefficient of the given order: 3 -> F3 ... 0 -> F0.
    const Expr &coefficient(int order) const {
        switch (order) {
        case 3: return f3_;
        case 2: return f2_;
        case 1: return f1_;
        default: return f0_;
        }
    }

    /// F3·y''' + F2·y'' + F1·y' + F0 as a single expression.
    Expr lhs() const {
        return simplify(Expr::sum({Expr::product({f3_, Expr::var(Var::Y3)}), Expr::product({f2_, Expr::var(Var::Y2)}),
                                   Expr::product({f1_, Expr::var(Var::Y1)}), f0_}));
    }

private:
    Expr f3_, f2_, f1_, f0_;
};

enum class Verdict { SymbolicPass, NumericPass, Fail };

inline std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::SymbolicPass: return "symbolic";
    case Verdict::NumericPass: return "numeric";
    case Verdict::Fail: return "fail";
    }
    return "?";
}

/// One of the six mixed-partial conditions, ∂_{wrt} F_{lhs_order} = ∂_{rhs_wrt} F_{rhs_order}.
struct ConditionSpec {
    std::string_view id;
    int lhs_order;
    Var lhs_wrt;
    int rhs_order;
    Var rhs_wrt;
};

inline constexpr std::array<ConditionSpec, 6> kConditions{{
    {"i", 0, Var::Y2, 3, Var::T},
    {"ii", 1, Var::Y2, 3, Var::Y},
    {"iii", 2, Var::Y2, 3, Var::Y1},
    {"iv", 0, Var::Y1, 2, Var::T},
    {"v", 1, Var::Y1, 2, Var::Y},
    {"vi", 0, Var::Y, 1, Var::T},
}};

struct ConditionResult {
    std::string_view id;
    Expr lhs;
    Expr rhs;
    Verdict verdict = Verdict::Fail;
};

struct ExactnessReport {
    std::array<ConditionResult, 6> conditions;

    bool exact() const {
        for (const auto &c : conditions)
            if (c.verdict == Verdict::Fail) return false;
        return true;
    }
    bool symbolic() const {
        for (const auto &c : conditions)
            if (c.verdict != Verdict::SymbolicPass) return false;
        return true;
    }
    const ConditionResult &operator[](std::string_view id) const {
        for (const auto &c : conditions)
            if (c.id == id) return c;
        throw std::out_of_range("unknown condition id");
    }
};

inline ExactnessReport check_exact(const Equation &eq, Sampler &s) {
    ExactnessReport report;
    for (std::size_t i = 0; i < kConditions.size(); ++i) {
        const ConditionSpec &c = kConditions[i];
        ConditionResult &r = report.conditions[i];
        r.id = c.id;
        r.lhs = partial(eq.coefficient(c.lhs_order), c.lhs_wrt);
        r.rhs = partial(eq.coefficient(c.rhs_order), c.rhs_wrt);
        if ((r.lhs - r.rhs).is_zero()) r.verdict = Verdict::SymbolicPass;
        else if (equivalent(r.lhs, r.rhs, s)) r.verdict = Verdict::NumericPass;
        else r.verdict = Verdict::Fail;
    }
    return report;
}

/// Lower limits (t0, y0, y0', y0'') of the first-integral line integral.
struct BasePoint {
    Rational t0{1}, y0{1}, y10{1}, y20{1};

    JetPoint point() const { return {to_double(t0), to_double(y0), to_double(y10), to_double(y20), std::nullopt}; }

    /// Throws InvalidEquation if any coefficient is singular at the base point.
    void validate_for(const Equation &eq) const {
        for (int order = 0; order <= 3; ++order) {
            try {
                (void)eval(eq.coefficient(order), point());
            } catch (const DomainError &err) {
                throw InvalidEquation("base point is singular for F" + std::to_string(order) + ": " + err.what());
            }
        }
    }
};

struct FirstIntegral {
    Expr psi;
    BasePoint base;
};

/// Ψ = ∫_{t0}^{t} F0(ξ,y,y',y'') + ∫_{y0}^{y} F1(t0,ξ,y',y'') + ∫_{y0'}^{y'} F2(t0,y0,ξ,y'') + ∫_{y0''}^{y''} F3(t0,y0,y0',ξ),
/// normalised so that Ψ(base) = 0.
inline FirstIntegral first_integral(const Equation &eq, const BasePoint &base, Sampler &s) {
    if (!check_exact(eq, s).exact()) throw NotExact();
    base.validate_for(eq);

    const Expr t0 = Expr::num(base.t0), y0 = Expr::num(base.y0), y10 = Expr::num(base.y10), y20 = Expr::num(base.y20);
    struct Term {
        const char *name;
        Expr integrand;
        Var v;
        Expr lo;
    };
    Expr f1 = substitute(eq.f1(), Var::T, t0);
    Expr f2 = substitute(substitute(eq.f2(), Var::T, t0), Var::Y, y0);
    Expr f3 = substitute(substitute(substitute(eq.f3(), Var::T, t0), Var::Y, y0), Var::Y1, y10);
    const std::array<Term, 4> terms{{
        {"F0 over t", eq.f0(), Var::T, t0},
        {"F1 over y", f1, Var::Y, y0},
        {"F2 over y'", f2, Var::Y1, y10},
        {"F3 over y''", f3, Var::Y2, y20},
    }};
    std::vector<Expr> parts;
    for (const Term &t : terms) {
        try {
            parts.push_back(definite_integral(t.integrand, t.v, t.lo, Expr::var(t.v)));
        } catch (const UnsupportedIntegrand &err) {
            throw UnsupportedIntegrand(std::string(t.name) + ": " + err.what());
        }
    }
    return {simplify(Expr::sum(std::move(parts))), base};
}

inline FirstIntegral first_integral(const Equation &eq, const BasePoint &base = {}) {
    Sampler s;
    return first_integral(eq, base, s);
}

/// dΨ/dt equals the equation's left side, checked at points with random y'''.
inline bool verify_first_integral(const Equation &eq, const FirstIntegral &fi, Sampler &s) {
    if (depends_on(fi.psi, Var::Y3)) return false;
    return equivalent(total_derivative(fi.psi), eq.lhs(), s);
}

} // namespace exode

#endif
