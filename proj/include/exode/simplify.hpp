#ifndef EXODE_SIMPLIFY_HPP
#define EXODE_SIMPLIFY_HPP

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "expr.hpp"

namespace exode {

namespace detail {

// Product-of-sums expansion is skipped above this many resulting terms.
inline constexpr std::size_t kMaxExpansionTerms = 256;
// Integer powers of constants are only folded below this exponent magnitude.
inline constexpr long kMaxFoldedExponent = 64;

struct SimplifyOptions {
    bool trust_canonical = true;
};

inline Expr simplify_impl(const Expr &e, const SimplifyOptions &opt);

inline Expr canon_const(const Rational &v) { return Expr::num(v); }

inline Expr canon_power(const Expr &base, const Rational &k) {
    Node n;
    n.kind = Kind::Power;
    n.value = k;
    n.args.push_back(base);
    return make_canonical(std::move(n));
}

inline Expr canon_func(Fn f, const Expr &arg) {
    Node n;
    n.kind = Kind::Func;
    n.fn = f;
    n.args.push_back(arg);
    return make_canonical(std::move(n));
}

inline Expr canon_nary(Kind k, std::vector<Expr> args) {
    Node n;
    n.kind = k;
    n.args = std::move(args);
    return make_canonical(std::move(n));
}

inline bool is_even_integer(const Rational &r) {
    return is_integer(r) && (boost::multiprecision::numerator(r) % 2) == 0;
}

inline Rational rational_pow(const Rational &b, long k) {
    Rational r(1);
    Rational base = k < 0 ? Rational(1) / b : b;
    for (long i = 0, n = k < 0 ? -k : k; i < n; ++i) r *= base;
    return r;
}

inline Expr build_product(const Rational &coef, std::vector<Expr> factors, const SimplifyOptions &opt);

/// Canonical Power(base, k) for an already-canonical base.
inline Expr make_power(const Expr &base, const Rational &k, const SimplifyOptions &opt) {
    if (k == 0) return canon_const(1);
    if (k == 1) return base;
    switch (base.kind()) {
    case Kind::Const: {
        const Rational &c = base.value();
        if (c == 1) return canon_const(1);
        if (c == 0) return k > 0 ? canon_const(0) : canon_power(base, k);
        if (is_integer(k) && abs(k) <= kMaxFoldedExponent)
            return canon_const(rational_pow(c, boost::multiprecision::numerator(k).convert_to<long>()));
        return canon_power(base, k);
    }
    case Kind::Power: {
        // (b^j)^k = b^(jk) except when j is even and k fractional ((b^2)^(1/2) = |b|).
        const Rational &j = base.exponent();
        if (is_integer(k) || !is_even_integer(j)) return make_power(base.base(), j * k, opt);
        return canon_power(base, k);
    }
    case Kind::Product: {
        if (!is_integer(k)) return canon_power(base, k);
        std::vector<Expr> factors;
        factors.reserve(base.args().size());
        for (const Expr &f : base.args()) factors.push_back(make_power(f, k, opt));
        return build_product(Rational(1), std::move(factors), opt);
    }
    default:
        return canon_power(base, k);
    }
}

inline void split_term(const Expr &t, Rational &coef, Expr &rest) {
    if (t.is(Kind::Const)) {
        coef = t.value();
        rest = canon_const(1);
        return;
    }
    if (t.is(Kind::Product) && t.args().front().is(Kind::Const)) {
        coef = t.args().front().value();
        std::vector<Expr> tail(t.args().begin() + 1, t.args().end());
        rest = tail.size() == 1 ? tail.front() : canon_nary(Kind::Product, std::move(tail));
        return;
    }
    coef = 1;
    rest = t;
}

inline Expr scale_term(const Rational &coef, const Expr &rest) {
    if (coef == 0) return canon_const(0);
    if (rest.is_one()) return canon_const(coef);
    if (coef == 1) return rest;
    std::vector<Expr> args;
    args.push_back(canon_const(coef));
    if (rest.is(Kind::Product)) args.insert(args.end(), rest.args().begin(), rest.args().end());
    else args.push_back(rest);
    return canon_nary(Kind::Product, std::move(args));
}

/// Canonical sum of already-canonical terms.
inline Expr build_sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (Expr &t : terms) {
        if (t.is(Kind::Sum)) flat.insert(flat.end(), t.args().begin(), t.args().end());
        else flat.push_back(std::move(t));
    }
    Rational constant(0);
    std::map<Expr, Rational, ExprLess> collected;
    for (const Expr &t : flat) {
        Rational c;
        Expr rest;
        split_term(t, c, rest);
        if (rest.is_one()) constant += c;
        else collected[rest] += c;
    }
    std::vector<Expr> out;
    if (constant != 0) out.push_back(canon_const(constant));
    for (const auto &[rest, c] : collected)
        if (c != 0) out.push_back(scale_term(c, rest));
    if (out.empty()) return canon_const(0);
    if (out.size() == 1) return out.front();
    return canon_nary(Kind::Sum, std::move(out));
}

inline int compare_factor(const Expr &a, const Expr &b) {
    const Expr &ba = a.is(Kind::Power) ? a.base() : a;
    const Expr &bb = b.is(Kind::Power) ? b.base() : b;
    if (int c = compare(ba, bb)) return c;
    return compare(a, b);
}

/// Canonical product of already-canonical factors times a rational coefficient.
inline Expr build_product(const Rational &coef_in, std::vector<Expr> factors, const SimplifyOptions &opt) {
    Rational coef = coef_in;
    std::map<Expr, Rational, ExprLess> powers;
    std::vector<Expr> pending = std::move(factors);
    while (!pending.empty()) {
        Expr f = std::move(pending.back());
        pending.pop_back();
        switch (f.kind()) {
        case Kind::Const: coef *= f.value(); break;
        case Kind::Product: pending.insert(pending.end(), f.args().begin(), f.args().end()); break;
        case Kind::Power: powers[f.base()] += f.exponent(); break;
        default: powers[f] += 1; break;
        }
    }
    if (coef == 0) return canon_const(0);

    std::vector<Expr> merged;
    bool reflatten = false;
    for (const auto &[base, k] : powers) {
        if (k == 0) continue;
        Expr p = make_power(base, k, opt);
        // A merged power folded to a constant or distributed over a product.
        if (p.is(Kind::Const) || p.is(Kind::Product)) reflatten = true;
        merged.push_back(std::move(p));
    }
    if (reflatten) return build_product(coef, std::move(merged), opt);

    // Distribute over sum factors.
    std::size_t expansion = 1;
    bool has_sum = false;
    for (const Expr &m : merged) {
        if (m.is(Kind::Sum)) {
            has_sum = true;
            expansion *= m.args().size();
            if (expansion > kMaxExpansionTerms) break;
        }
    }
    if (has_sum && expansion <= kMaxExpansionTerms) {
        std::vector<Expr> plain;
        std::vector<const Expr *> sums;
        for (const Expr &m : merged) {
            if (m.is(Kind::Sum)) sums.push_back(&m);
            else plain.push_back(m);
        }
        std::vector<std::vector<Expr>> partial{plain};
        for (const Expr *s : sums) {
            std::vector<std::vector<Expr>> next;
            next.reserve(partial.size() * s->args().size());
            for (const auto &p : partial) {
                for (const Expr &t : s->args()) {
                    auto q = p;
                    q.push_back(t);
                    next.push_back(std::move(q));
                }
            }
            partial = std::move(next);
        }
        std::vector<Expr> terms;
        terms.reserve(partial.size());
        for (auto &p : partial) terms.push_back(build_product(coef, std::move(p), opt));
        return build_sum(std::move(terms));
    }

    std::sort(merged.begin(), merged.end(), [](const Expr &a, const Expr &b) { return compare_factor(a, b) < 0; });
    if (merged.empty()) return canon_const(coef);
    if (coef == 1 && merged.size() == 1) return merged.front();
    std::vector<Expr> args;
    args.reserve(merged.size() + 1);
    if (coef != 1) args.push_back(canon_const(coef));
    for (Expr &m : merged) args.push_back(std::move(m));
    return canon_nary(Kind::Product, std::move(args));
}

// Recognises c*ln(u) inside an exp argument.
inline bool as_scaled_log(const Expr &t, Rational &c, Expr &u) {
    if (t.is(Kind::Func) && t.fn() == Fn::Ln) {
        c = 1;
        u = t.arg();
        return true;
    }
    if (t.is(Kind::Product) && t.args().size() == 2 && t.args()[0].is(Kind::Const) && t.args()[1].is(Kind::Func) &&
        t.args()[1].fn() == Fn::Ln) {
        c = t.args()[0].value();
        u = t.args()[1].arg();
        return true;
    }
    return false;
}

inline Expr make_func(Fn f, const Expr &a, const SimplifyOptions &opt) {
    switch (f) {
    case Fn::Exp: {
        if (a.is_zero()) return canon_const(1);
        // exp(s + c*ln(u)) = exp(s) * u^c
        std::vector<Expr> terms = a.is(Kind::Sum) ? a.args() : std::vector<Expr>{a};
        std::vector<Expr> keep;
        std::vector<Expr> factors;
        for (const Expr &t : terms) {
            Rational c;
            Expr u;
            if (as_scaled_log(t, c, u)) factors.push_back(make_power(u, c, opt));
            else keep.push_back(t);
        }
        if (factors.empty()) return canon_func(Fn::Exp, a);
        if (!keep.empty()) {
            Expr rest = build_sum(std::move(keep));
            factors.push_back(make_func(Fn::Exp, rest, opt));
        }
        return build_product(Rational(1), std::move(factors), opt);
    }
    case Fn::Ln:
        if (a.is_one()) return canon_const(0);
        if (a.is(Kind::Func) && a.fn() == Fn::Exp) return a.arg();
        return canon_func(Fn::Ln, a);
    case Fn::Sin:
        if (a.is_zero()) return canon_const(0);
        return canon_func(Fn::Sin, a);
    case Fn::Cos:
        if (a.is_zero()) return canon_const(1);
        return canon_func(Fn::Cos, a);
    }
    return canon_func(f, a);
}

inline Expr simplify_impl(const Expr &e, const SimplifyOptions &opt) {
    if (opt.trust_canonical && e.canonical()) return e;
    switch (e.kind()) {
    case Kind::Const:
    case Kind::Var:
        return e;
    case Kind::Power:
        return make_power(simplify_impl(e.base(), opt), e.exponent(), opt);
    case Kind::Func:
        return make_func(e.fn(), simplify_impl(e.arg(), opt), opt);
    case Kind::Sum: {
        std::vector<Expr> terms;
        terms.reserve(e.args().size());
        for (const Expr &t : e.args()) terms.push_back(simplify_impl(t, opt));
        return build_sum(std::move(terms));
    }
    case Kind::Product: {
        std::vector<Expr> factors;
        factors.reserve(e.args().size());
        for (const Expr &f : e.args()) factors.push_back(simplify_impl(f, opt));
        return build_product(Rational(1), std::move(factors), opt);
    }
    }
    return e;
}

} // namespace detail

/// Canonical form: flattening, constant folding, like-term collection, power merging,
/// expansion of products over sums and exp/ln cancellation.
inline Expr simplify(const Expr &e) { return detail::simplify_impl(e, {}); }

/// Re-simplifies every node, ignoring cached canonical markers.
inline Expr simplify_from_scratch(const Expr &e) { return detail::simplify_impl(e, {.trust_canonical = false}); }

// Arithmetic on expressions yields simplified results.
inline Expr operator+(const Expr &a, const Expr &b) { return simplify(Expr::sum({a, b})); }
inline Expr operator-(const Expr &a) { return simplify(Expr::product({Expr::num(-1), a})); }
inline Expr operator-(const Expr &a, const Expr &b) { return simplify(Expr::sum({a, Expr::product({Expr::num(-1), b})})); }
inline Expr operator*(const Expr &a, const Expr &b) { return simplify(Expr::product({a, b})); }
inline Expr operator/(const Expr &a, const Expr &b) { return simplify(Expr::product({a, Expr::power(b, Rational(-1))})); }
inline Expr pow(const Expr &a, const Rational &k) { return simplify(Expr::power(a, k)); }
inline Expr exp(const Expr &a) { return simplify(Expr::func(Fn::Exp, a)); }
inline Expr ln(const Expr &a) { return simplify(Expr::func(Fn::Ln, a)); }
inline Expr sin(const Expr &a) { return simplify(Expr::func(Fn::Sin, a)); }
inline Expr cos(const Expr &a) { return simplify(Expr::func(Fn::Cos, a)); }

inline Expr num(long long v) { return Expr::num(v); }
inline Expr num(const Rational &v) { return Expr::num(v); }
inline Expr var(Var v) { return Expr::var(v); }

/// Replaces every occurrence of `v` with `value`; result simplified.
inline Expr substitute(const Expr &e, Var v, const Expr &value) {
    switch (e.kind()) {
    case Kind::Const: return e;
    case Kind::Var: return e.var() == v ? simplify(value) : e;
    default: break;
    }
    if (!depends_on(e, v)) return simplify(e);
    std::vector<Expr> args;
    args.reserve(e.args().size());
    for (const Expr &c : e.args()) args.push_back(substitute(c, v, value));
    switch (e.kind()) {
    case Kind::Sum: return simplify(Expr::sum(std::move(args)));
    case Kind::Product: return simplify(Expr::product(std::move(args)));
    case Kind::Power: return simplify(Expr::power(args.front(), e.exponent()));
    case Kind::Func: return simplify(Expr::func(e.fn(), args.front()));
    default: return e;
    }
}

} // namespace exode

#endif
