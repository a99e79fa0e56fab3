#ifndef EXODE_MU_SEARCH_HPP
#define EXODE_MU_SEARCH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "calculus.hpp"
#include "errors.hpp"
#include "exactness.hpp"
#include "sampler.hpp"

namespace exode {

struct InvalidXi : Error {
    using Error::Error;
};

/// ξ = α(t)·β(y)·γ(y')·δ(y''), restricted to the active variables.
class XiForm {
public:
    struct Factor {
        Var var;
        Expr expr;
    };

    /// ξ = product of the active variables themselves.
    static XiForm identity(VarSet active) {
        if (active.empty()) throw InvalidXi("xi needs at least one active variable");
        XiForm x;
        for (Var v : active.to_vector()) x.factors_.push_back({v, Expr::var(v)});
        x.finish();
        return x;
    }

    /// Splits a user-supplied product into univariate factors.
    static XiForm from_expr(const Expr &e) {
        Expr s = simplify(e);
        VarSet vars = free_vars(s);
        if (vars.empty()) throw InvalidXi("xi must depend on at least one jet variable");
        if (vars.contains(Var::Y3)) throw InvalidXi("xi must not depend on y'''");
        std::vector<Expr> parts = s.is(Kind::Product) ? s.args() : std::vector<Expr>{s};
        std::array<std::vector<Expr>, 4> grouped;
        std::vector<Expr> constants;
        for (const Expr &f : parts) {
            VarSet fv = free_vars(f);
            if (fv.empty()) {
                constants.push_back(f);
            } else if (fv.size() == 1) {
                grouped[static_cast<std::size_t>(fv.to_vector().front())].push_back(f);
            } else {
                throw InvalidXi("xi is not a product of univariate factors: " + print(f));
            }
        }
        XiForm x;
        for (Var v : kJetVars) {
            auto &g = grouped[static_cast<std::size_t>(v)];
            if (g.empty()) continue;
            if (x.factors_.empty()) g.insert(g.end(), constants.begin(), constants.end());
            x.factors_.push_back({v, simplify(Expr::product(g))});
        }
        x.finish();
        return x;
    }

    VarSet active() const { return active_; }
    const std::vector<Factor> &factors() const { return factors_; }
    const Expr &xi() const { return xi_; }

    /// True when ξ is a single variable with identity factor.
    bool is_single_identity() const {
        return factors_.size() == 1 && factors_.front().expr.is(Kind::Var);
    }

private:
    void finish() {
        std::vector<Expr> fs;
        for (const Factor &f : factors_) {
            active_.insert(f.var);
            fs.push_back(f.expr);
        }
        xi_ = simplify(Expr::product(std::move(fs)));
    }

    VarSet active_;
    std::vector<Factor> factors_;
    Expr xi_;
};

enum class RatioStatus { Active, Vacuous, Inconsistent };

inline std::string_view ratio_status_name(RatioStatus s) {
    switch (s) {
    case RatioStatus::Active: return "active";
    case RatioStatus::Vacuous: return "vacuous";
    case RatioStatus::Inconsistent: return "inconsistent";
    }
    return "?";
}

struct RatioEntry {
    std::string_view id;
    Expr numerator;
    Expr denominator;
    RatioStatus status = RatioStatus::Active;

    Expr ratio() const { return numerator / denominator; }
};

struct RatioSet {
    std::array<RatioEntry, 6> entries;

    const RatioEntry &operator[](std::string_view id) const {
        for (const auto &e : entries)
            if (e.id == id) return e;
        throw std::out_of_range("unknown ratio id");
    }
    bool any_inconsistent() const {
        return std::any_of(entries.begin(), entries.end(), [](const RatioEntry &e) { return e.status == RatioStatus::Inconsistent; });
    }
};

/// Candidate values of μ'(ξ)/μ(ξ), one per exactness condition.
///
/// Imposing ∂_a(μ F_p) = ∂_b(μ F_q) with μ = μ(ξ) gives
///   (μ'/μ)·(ξ_a F_p − ξ_b F_q) = ∂_b F_q − ∂_a F_p.
/// Conditions whose left side is not F0 are written with both sides negated.
inline RatioSet ratio_set(const Equation &eq, const XiForm &xi, Sampler &s) {
    RatioSet out;
    for (std::size_t i = 0; i < kConditions.size(); ++i) {
        const ConditionSpec &c = kConditions[i];
        const Expr &fp = eq.coefficient(c.lhs_order);
        const Expr &fq = eq.coefficient(c.rhs_order);
        Expr num = partial(fq, c.rhs_wrt) - partial(fp, c.lhs_wrt);
        Expr den = partial(xi.xi(), c.lhs_wrt) * fp - partial(xi.xi(), c.rhs_wrt) * fq;
        if (c.lhs_order != 0) {
            num = -num;
            den = -den;
        }
        RatioEntry &e = out.entries[i];
        e.id = c.id;
        e.numerator = num;
        e.denominator = den;
        if (is_zero(den, s)) e.status = is_zero(num, s) ? RatioStatus::Vacuous : RatioStatus::Inconsistent;
        else e.status = RatioStatus::Active;
    }
    return out;
}

/// g = μ'/μ as an expression in a single variable standing for ξ.
struct SymbolicG {
    Expr g;
    Var xi_var;
};

/// g(ξ) = c·ξ^k.
struct PowerLawG {
    Rational c;
    Rational k;
};

using GModel = std::variant<SymbolicG, PowerLawG>;

inline std::string describe(const GModel &g) {
    if (const auto *s = std::get_if<SymbolicG>(&g)) return print(s->g) + " with xi = " + std::string(var_name(s->xi_var));
    const auto &p = std::get<PowerLawG>(g);
    return to_string(p.c) + "*xi^" + detail::print_exponent(p.k);
}

namespace detail {

inline constexpr int kLevelSetPairs = 16;
inline constexpr int kPowerLawFitPoints = 16;
inline constexpr int kPowerLawConfirmPoints = 32;
inline constexpr double kPowerLawTol = 1e-6;
inline constexpr int kMaxSnapDenominator = 12;

// Solves factor(x) = target for x inside `iv`.
inline std::optional<double> invert_factor(const Expr &factor, Var v, double target, const Interval &iv) {
    if (factor.is(Kind::Var)) return iv.contains(target) ? std::optional<double>(target) : std::nullopt;
    // c * v^k
    Rational c(1);
    const Expr *pw = &factor;
    if (factor.is(Kind::Product) && factor.args().size() == 2 && factor.args()[0].is_const()) {
        c = factor.args()[0].value();
        pw = &factor.args()[1];
    }
    if (pw->is(Kind::Power) && pw->base().is(Kind::Var)) {
        double ratio = target / to_double(c);
        if (ratio <= 0.0) return std::nullopt;
        double x = std::pow(ratio, 1.0 / to_double(pw->exponent()));
        return iv.contains(x) ? std::optional<double>(x) : std::nullopt;
    }
    if (pw->is(Kind::Var)) {
        double x = target / to_double(c);
        return iv.contains(x) ? std::optional<double>(x) : std::nullopt;
    }
    // Bisection on the first sign change over a uniform grid.
    auto f = [&](double x) {
        JetPoint p;
        p.set(v, x);
        return eval(factor, p) - target;
    };
    constexpr int cells = 64;
    const double step = (iv.hi - iv.lo) / cells;
    try {
        double a = iv.lo, fa = f(a);
        for (int i = 1; i <= cells; ++i) {
            double b = iv.lo + step * i, fb = f(b);
            if (fa == 0.0) return a;
            if ((fa < 0) != (fb < 0)) {
                for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::fabs(a)); ++it) {
                    double m = 0.5 * (a + b), fm = f(m);
                    if ((fm < 0) == (fa < 0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                return 0.5 * (a + b);
            }
            a = b;
            fa = fb;
        }
    } catch (const DomainError &) {
    }
    return std::nullopt;
}

// Two points with equal ξ: every coordinate but the last active one is re-drawn, the last is solved for.
inline std::optional<std::pair<JetPoint, JetPoint>> level_set_pair(const XiForm &xi, Sampler &s) {
    JetPoint p = s.draw();
    double target;
    try {
        target = eval(xi.xi(), p, s.guard);
    } catch (const DomainError &) {
        return std::nullopt;
    }
    JetPoint q = s.draw();
    const auto &factors = xi.factors();
    double rest = 1.0;
    try {
        for (std::size_t i = 0; i + 1 < factors.size(); ++i) rest *= eval(factors[i].expr, q, s.guard);
    } catch (const DomainError &) {
        return std::nullopt;
    }
    if (rest == 0.0) return std::nullopt;
    const auto &last = factors.back();
    auto x = invert_factor(last.expr, last.var, target / rest, s.box[static_cast<std::size_t>(last.var)]);
    if (!x) return std::nullopt;
    q.set(last.var, *x);
    return std::make_pair(p, q);
}

inline bool depends_only_on_xi(const Expr &r, const XiForm &xi, Sampler &s) {
    int accepted = 0;
    const int budget = kLevelSetPairs * s.max_oversampling;
    for (int attempt = 0; attempt < budget && accepted < kLevelSetPairs; ++attempt) {
        auto pair = level_set_pair(xi, s);
        if (!pair) continue;
        double a, b;
        try {
            a = eval(r, pair->first, s.guard);
            b = eval(r, pair->second, s.guard);
        } catch (const DomainError &) {
            continue;
        }
        if (!close(a, b, s.tol)) return false;
        ++accepted;
    }
    if (accepted < kLevelSetPairs) throw InsufficientSamples("level-set sampling found too few admissible pairs");
    return true;
}

inline std::optional<Rational> snap_rational(double x) {
    for (int d = 1; d <= kMaxSnapDenominator; ++d) {
        double n = std::round(x * d);
        if (std::fabs(n / d - x) <= kPowerLawTol * std::max(1.0, std::fabs(x)))
            return Rational(static_cast<long long>(n), d);
    }
    return std::nullopt;
}

// Samples (ξ, g) at admissible points with ξ > 0.
inline std::vector<std::pair<double, double>> sample_g(const Expr &r, const XiForm &xi, Sampler &s, int count) {
    std::vector<std::pair<double, double>> out;
    const int budget = count * s.max_oversampling;
    for (int attempt = 0; attempt < budget && static_cast<int>(out.size()) < count; ++attempt) {
        JetPoint p = s.draw();
        try {
            double x = eval(xi.xi(), p, s.guard);
            double g = eval(r, p, s.guard);
            if (x > 0.0) out.emplace_back(x, g);
        } catch (const DomainError &) {
        }
    }
    if (static_cast<int>(out.size()) < count) throw InsufficientSamples("too few admissible points for the power-law fit");
    return out;
}

inline std::optional<GModel> fit_power_law(const Expr &r, const XiForm &xi, Sampler &s) {
    auto fit = sample_g(r, xi, s, kPowerLawFitPoints);
    if (std::all_of(fit.begin(), fit.end(), [&](const auto &xg) { return std::fabs(xg.second) <= s.tol; }))
        return SymbolicG{Expr::num(0), xi.factors().front().var};
    const bool negative = fit.front().second < 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &[x, g] : fit) {
        if (g == 0.0 || (g < 0) != negative) return std::nullopt;
        double lx = std::log(x), ly = std::log(std::fabs(g));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(fit.size());
    const double det = n * sxx - sx * sx;
    if (std::fabs(det) < 1e-12) return std::nullopt;
    const double k = (n * sxy - sx * sy) / det;
    const double c = (negative ? -1.0 : 1.0) * std::exp((sy - k * sx) / n);

    for (const auto &[x, g] : sample_g(r, xi, s, kPowerLawConfirmPoints))
        if (std::fabs(c * std::pow(x, k) - g) > kPowerLawTol * std::fabs(g)) return std::nullopt;

    auto cr = snap_rational(c);
    auto kr = snap_rational(k);
    if (!cr || !kr || *cr == 0) return std::nullopt;
    return PowerLawG{*cr, *kr};
}

} // namespace detail

/// Tests one ξ candidate: no inconsistent ratio, all active ratios agree, and their common
/// value depends on the jet only through ξ. Returns the identified g = μ'/μ.
inline std::optional<GModel> check_candidate(const Equation &eq, const XiForm &xi, Sampler &s) {
    RatioSet rs = ratio_set(eq, xi, s);
    if (rs.any_inconsistent()) return std::nullopt;

    std::vector<Expr> active;
    for (const auto &e : rs.entries)
        if (e.status == RatioStatus::Active) active.push_back(e.ratio());
    if (active.empty()) return SymbolicG{Expr::num(0), xi.factors().front().var};

    for (std::size_t i = 1; i < active.size(); ++i)
        if (!equivalent(active[i], active.front(), s)) return std::nullopt;

    if (!detail::depends_only_on_xi(active.front(), xi, s)) return std::nullopt;

    if (xi.is_single_identity()) {
        const Var v = xi.factors().front().var;
        for (const Expr &r : active)
            if (free_vars(r).subset_of(VarSet{v})) return SymbolicG{r, v};
    }
    return detail::fit_power_law(active.front(), xi, s);
}

/// μ = exp(∫ g dξ) with ξ substituted back in terms of the jet variables.
inline Expr build_mu(const XiForm &xi, const GModel &g) {
    if (const auto *sym = std::get_if<SymbolicG>(&g)) {
        Antiderivative a = antiderivative(sym->g, sym->xi_var);
        if (!a.supported) throw UnsupportedIntegrand("no rule for g = " + print(sym->g));
        return substitute(exp(a.result), sym->xi_var, xi.xi());
    }
    const auto &p = std::get<PowerLawG>(g);
    if (p.k == -1) return pow(xi.xi(), p.c);
    const Rational e = p.k + 1;
    return exp(Expr::num(p.c / e) * pow(xi.xi(), e));
}

inline Equation apply_mu(const Equation &eq, const Expr &mu) {
    Expr m = simplify(mu);
    if (m.is_zero()) throw std::invalid_argument("integrating factor must not be zero");
    return Equation(m * eq.f3(), m * eq.f2(), m * eq.f1(), m * eq.f0());
}

enum class Certificate { Symbolic, Numeric };

inline std::string_view certificate_name(Certificate c) { return c == Certificate::Symbolic ? "symbolic" : "numeric"; }

struct IntegratingFactor {
    XiForm xi;
    GModel g;
    Expr mu;
    Certificate certificate = Certificate::Numeric;
};

/// ξ candidates in search order: identity factors over the 15 nonempty subsets of
/// {t, y, y', y''}, smallest subsets first.
inline std::vector<VarSet> candidate_subsets() {
    std::vector<VarSet> out;
    for (std::uint8_t m = 1; m < 16; ++m) out.push_back(VarSet::from_mask(m));
    std::stable_sort(out.begin(), out.end(), [](VarSet a, VarSet b) { return a.size() < b.size(); });
    return out;
}

/// Runs every candidate and keeps those whose multiplied equation passes check_exact.
inline std::vector<IntegratingFactor> search(const Equation &eq, const std::optional<XiForm> &user_xi, Sampler &s) {
    std::vector<IntegratingFactor> found;
    {
        Sampler cs = s.derive(0);
        ExactnessReport rep = check_exact(eq, cs);
        if (rep.exact()) {
            XiForm xi = user_xi ? *user_xi : XiForm::identity({Var::T});
            found.push_back({xi, SymbolicG{Expr::num(0), xi.factors().front().var}, Expr::num(1),
                             rep.symbolic() ? Certificate::Symbolic : Certificate::Numeric});
            return found;
        }
    }

    std::vector<std::pair<XiForm, std::uint64_t>> candidates;
    if (user_xi) candidates.emplace_back(*user_xi, 16);
    for (VarSet v : candidate_subsets()) candidates.emplace_back(XiForm::identity(v), v.mask());

    for (const auto &[xi, salt] : candidates) {
        Sampler cs = s.derive(salt);
        try {
            auto g = check_candidate(eq, xi, cs);
            if (!g) continue;
            Expr mu = build_mu(xi, *g);
            Equation multiplied = apply_mu(eq, mu);
            ExactnessReport rep = check_exact(multiplied, cs);
            if (!rep.exact()) continue;
            bool duplicate = std::any_of(found.begin(), found.end(), [&](const IntegratingFactor &f) { return f.mu == mu; });
            if (duplicate) continue;
            found.push_back({xi, *g, mu, rep.symbolic() ? Certificate::Symbolic : Certificate::Numeric});
        } catch (const InsufficientSamples &) {
        } catch (const UnsupportedIntegrand &) {
        } catch (const InvalidEquation &) {
        } catch (const std::invalid_argument &) {
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const IntegratingFactor &a, const IntegratingFactor &b) {
        if (a.xi.active().size() != b.xi.active().size()) return a.xi.active().size() < b.xi.active().size();
        return size(a.mu) < size(b.mu);
    });
    return found;
}

} // namespace exode

#endif
