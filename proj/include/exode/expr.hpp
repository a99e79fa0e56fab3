#ifndef EXODE_EXPR_HPP
#define EXODE_EXPR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace exode {

using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational &r) { return boost::multiprecision::denominator(r) == 1; }

inline double to_double(const Rational &r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational &r) {
    if (is_integer(r)) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

/// Jet variables t, y, y', y'' and y''' (the last only in verification expressions).
enum class Var : std::uint8_t { T = 0, Y = 1, Y1 = 2, Y2 = 3, Y3 = 4 };

inline constexpr std::array<Var, 4> kJetVars{Var::T, Var::Y, Var::Y1, Var::Y2};

inline std::string_view var_name(Var v) {
    switch (v) {
    case Var::T: return "t";
    case Var::Y: return "y";
    case Var::Y1: return "y'";
    case Var::Y2: return "y''";
    case Var::Y3: return "y'''";
    }
    return "?";
}

/// Small set of jet variables, stored as a bitmask.
class VarSet {
public:
    constexpr VarSet() = default;
    constexpr VarSet(std::initializer_list<Var> vars) {
        for (Var v : vars) insert(v);
    }
    static constexpr VarSet from_mask(std::uint8_t mask) {
        VarSet s;
        s.bits_ = mask;
        return s;
    }

    constexpr void insert(Var v) { bits_ |= bit(v); }
    constexpr void erase(Var v) { bits_ &= static_cast<std::uint8_t>(~bit(v)); }
    constexpr bool contains(Var v) const { return (bits_ & bit(v)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t mask() const { return bits_; }
    constexpr bool subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr std::size_t size() const {
        std::size_t n = 0;
        for (std::uint8_t b = bits_; b != 0; b &= static_cast<std::uint8_t>(b - 1)) ++n;
        return n;
    }
    std::vector<Var> to_vector() const {
        std::vector<Var> out;
        for (std::uint8_t i = 0; i < 5; ++i)
            if (bits_ & (1u << i)) out.push_back(static_cast<Var>(i));
        return out;
    }
    constexpr VarSet operator|(VarSet o) const { return from_mask(bits_ | o.bits_); }
    constexpr bool operator==(const VarSet &) const = default;

private:
    static constexpr std::uint8_t bit(Var v) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v)); }
    std::uint8_t bits_ = 0;
};

enum class Fn : std::uint8_t { Exp, Ln, Sin, Cos };

inline std::string_view fn_name(Fn f) {
    switch (f) {
    case Fn::Exp: return "exp";
    case Fn::Ln: return "ln";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    }
    return "?";
}

// Ordering of kinds is part of the canonical key.
enum class Kind : std::uint8_t { Const, Var, Power, Product, Sum, Func };

class Expr;

namespace detail {
struct Node {
    Kind kind = Kind::Const;
    Rational value;  // Const value or Power exponent
    Var var = Var::T;
    Fn fn = Fn::Exp;
    std::vector<Expr> args;
    bool canonical = false;
};
} // namespace detail

/// Immutable expression tree. Copies share structure; nodes are never mutated after construction.
class Expr {
public:
    Expr();

    // Raw constructors. They build exactly the node asked for; use simplify() for canonical form.
    static Expr num(Rational v);
    static Expr num(long long v) { return num(Rational(v)); }
    static Expr var(Var v);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(Expr base, Rational exponent);
    static Expr func(Fn f, Expr arg);

    Kind kind() const { return node_->kind; }
    bool is(Kind k) const { return node_->kind == k; }
    const Rational &value() const { return node_->value; }
    const Rational &exponent() const { return node_->value; }
    Var var() const { return node_->var; }
    Fn fn() const { return node_->fn; }
    const std::vector<Expr> &args() const { return node_->args; }
    const Expr &base() const { return node_->args.front(); }
    const Expr &arg() const { return node_->args.front(); }
    bool canonical() const { return node_->canonical; }

    bool is_const() const { return is(Kind::Const); }
    bool is_const(const Rational &v) const { return is(Kind::Const) && node_->value == v; }
    bool is_zero() const { return is_const(Rational(0)); }
    bool is_one() const { return is_const(Rational(1)); }

    const detail::Node *identity() const { return node_.get(); }

    friend Expr make_canonical(detail::Node n);

private:
    explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;
};

inline Expr make_canonical(detail::Node n) {
    n.canonical = true;
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

inline Expr::Expr() : Expr(num(Rational(0))) {}

inline Expr Expr::num(Rational v) {
    detail::Node n;
    n.kind = Kind::Const;
    n.value = std::move(v);
    n.canonical = true;
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

inline Expr Expr::var(Var v) {
    detail::Node n;
    n.kind = Kind::Var;
    n.var = v;
    n.canonical = true;
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

inline Expr Expr::sum(std::vector<Expr> terms) {
    detail::Node n;
    n.kind = Kind::Sum;
    n.args = std::move(terms);
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

inline Expr Expr::product(std::vector<Expr> factors) {
    detail::Node n;
    n.kind = Kind::Product;
    n.args = std::move(factors);
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

inline Expr Expr::power(Expr base, Rational exponent) {
    detail::Node n;
    n.kind = Kind::Power;
    n.value = std::move(exponent);
    n.args.push_back(std::move(base));
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

inline Expr Expr::func(Fn f, Expr arg) {
    detail::Node n;
    n.kind = Kind::Func;
    n.fn = f;
    n.args.push_back(std::move(arg));
    return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

/// Total order on trees; the canonical key used to sort Sum and Product children.
inline int compare(const Expr &a, const Expr &b) {
    if (a.identity() == b.identity()) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
    case Kind::Const:
        return a.value() == b.value() ? 0 : (a.value() < b.value() ? -1 : 1);
    case Kind::Var:
        return a.var() == b.var() ? 0 : (a.var() < b.var() ? -1 : 1);
    case Kind::Power: {
        if (int c = compare(a.base(), b.base())) return c;
        return a.exponent() == b.exponent() ? 0 : (a.exponent() < b.exponent() ? -1 : 1);
    }
    case Kind::Func:
        if (a.fn() != b.fn()) return a.fn() < b.fn() ? -1 : 1;
        return compare(a.arg(), b.arg());
    case Kind::Product:
    case Kind::Sum: {
        const auto &x = a.args();
        const auto &y = b.args();
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
            if (int c = compare(x[i], y[i])) return c;
        if (x.size() == y.size()) return 0;
        return x.size() < y.size() ? -1 : 1;
    }
    }
    return 0;
}

inline bool operator==(const Expr &a, const Expr &b) { return compare(a, b) == 0; }

struct ExprLess {
    bool operator()(const Expr &a, const Expr &b) const { return compare(a, b) < 0; }
};

inline VarSet free_vars(const Expr &e) {
    switch (e.kind()) {
    case Kind::Const: return {};
    case Kind::Var: return {e.var()};
    default: {
        VarSet out;
        for (const Expr &c : e.args()) out = out | free_vars(c);
        return out;
    }
    }
}

inline bool depends_on(const Expr &e, Var v) { return free_vars(e).contains(v); }

/// Node count.
inline std::size_t size(const Expr &e) {
    std::size_t n = 1;
    for (const Expr &c : e.args()) n += size(c);
    return n;
}

// ---------------------------------------------------------------------------
// Printing. Emits the parse grammar; parse(print(e)) reproduces simplify(e).

namespace detail {

inline std::string print_exponent(const Rational &k) {
    if (is_integer(k)) return to_string(k);
    return "(" + to_string(k) + ")";
}

inline void print_into(std::string &out, const Expr &e);

inline bool is_atomic_for_power(const Expr &e) {
    if (e.is(Kind::Var)) return e.var() == Var::T || e.var() == Var::Y;
    if (e.is(Kind::Func)) return true;
    if (e.is(Kind::Const)) return is_integer(e.value()) && e.value() >= 0;
    return false;
}

inline void print_factor(std::string &out, const Expr &e) {
    if (e.is(Kind::Sum) || (e.is(Kind::Const) && (e.value() < 0 || !is_integer(e.value())))) {
        out += '(';
        print_into(out, e);
        out += ')';
    } else {
        print_into(out, e);
    }
}

// Prints a product whose leading coefficient is already known to be positive.
inline void print_product(std::string &out, const Rational &coef, const std::vector<Expr> &factors) {
    bool first = true;
    if (coef != 1 || factors.empty()) {
        out += to_string(coef);
        first = false;
    }
    for (const Expr &f : factors) {
        if (!first) out += '*';
        first = false;
        print_factor(out, f);
    }
}

inline void split_coefficient(const Expr &e, Rational &coef, std::vector<Expr> &rest) {
    coef = 1;
    rest.clear();
    if (e.is(Kind::Const)) {
        coef = e.value();
        return;
    }
    if (e.is(Kind::Product)) {
        for (const Expr &f : e.args()) {
            if (f.is(Kind::Const)) coef *= f.value();
            else rest.push_back(f);
        }
        return;
    }
    rest.push_back(e);
}

inline void print_into(std::string &out, const Expr &e) {
    switch (e.kind()) {
    case Kind::Const:
        out += to_string(e.value());
        return;
    case Kind::Var:
        out += var_name(e.var());
        return;
    case Kind::Power:
        if (is_atomic_for_power(e.base())) {
            print_into(out, e.base());
        } else {
            out += '(';
            print_into(out, e.base());
            out += ')';
        }
        out += '^';
        out += print_exponent(e.exponent());
        return;
    case Kind::Func:
        out += fn_name(e.fn());
        out += '(';
        print_into(out, e.arg());
        out += ')';
        return;
    case Kind::Product: {
        Rational coef;
        std::vector<Expr> rest;
        split_coefficient(e, coef, rest);
        if (coef < 0) {
            out += '-';
            coef = -coef;
        }
        print_product(out, coef, rest);
        return;
    }
    case Kind::Sum: {
        // Constant term printed last.
        std::vector<const Expr *> order;
        const Expr *constant = nullptr;
        for (const Expr &t : e.args()) {
            if (t.is(Kind::Const)) constant = &t;
            else order.push_back(&t);
        }
        if (constant) order.push_back(constant);
        bool first = true;
        for (const Expr *t : order) {
            Rational coef;
            std::vector<Expr> rest;
            split_coefficient(*t, coef, rest);
            if (coef < 0) {
                out += first ? "-" : " - ";
                coef = -coef;
            } else if (!first) {
                out += " + ";
            }
            first = false;
            print_product(out, coef, rest);
        }
        return;
    }
    }
}

} // namespace detail

inline std::string print(const Expr &e) {
    std::string out;
    detail::print_into(out, e);
    return out;
}

inline std::ostream &operator<<(std::ostream &os, const Expr &e) { return os << print(e); }

} // namespace exode

#endif
