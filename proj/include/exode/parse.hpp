#ifndef EXODE_PARSE_HPP
#define EXODE_PARSE_HPP

#include <cctype>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "simplify.hpp"

namespace exode {

struct ParseOptions {
    // y''' / y3 are only legal in verification expressions.
    bool allow_y3 = false;
};

namespace detail {

// Recursive descent over
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | variable | func '(' expr ')' | '(' expr ')'
class Parser {
public:
    Parser(std::string_view text, ParseOptions opt) : text_(text), opt_(opt) {}

    Expr parse_all() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "an expression");
        Expr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) throw SyntaxError(pos_, "an operator or end of input");
        return simplify(e);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw SyntaxError(pos_, std::string("'") + c + "'");
    }

    Expr parse_expr() {
        std::vector<Expr> terms{parse_term()};
        for (;;) {
            if (accept('+')) terms.push_back(parse_term());
            else if (accept('-')) terms.push_back(Expr::product({Expr::num(-1), parse_term()}));
            else break;
        }
        return terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
    }

    Expr parse_term() {
        std::vector<Expr> factors{parse_unary()};
        for (;;) {
            if (accept('*')) factors.push_back(parse_unary());
            else if (accept('/')) factors.push_back(Expr::power(parse_unary(), Rational(-1)));
            else break;
        }
        return factors.size() == 1 ? factors.front() : Expr::product(std::move(factors));
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::product({Expr::num(-1), parse_unary()});
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) {
            skip_ws();
            std::size_t at = pos_;
            Expr k = simplify(parse_unary());
            if (!k.is_const()) throw SyntaxError(at, "a rational constant exponent");
            return Expr::power(base, k.value());
        }
        return base;
    }

    Expr parse_number() {
        std::size_t start = pos_;
        Rational whole(0);
        bool digits = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            whole = whole * 10 + (text_[pos_] - '0');
            ++pos_;
            digits = true;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            Rational scale(1);
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                scale /= 10;
                whole += scale * (text_[pos_] - '0');
                ++pos_;
                digits = true;
            }
        }
        if (!digits) throw SyntaxError(start, "a digit");
        return Expr::num(whole);
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "an operand (number, variable, function or '(')");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw SyntaxError(pos_, "an operand (number, variable, function or '(')");
    }

    Expr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string_view id = text_.substr(start, pos_ - start);
        if (id == "t") {
            reject_prime(start);
            return Expr::var(Var::T);
        }
        if (id == "y") {
            int primes = 0;
            while (pos_ < text_.size() && text_[pos_] == '\'') {
                ++primes;
                ++pos_;
            }
            return derivative_var(primes, start);
        }
        if (id.size() == 2 && id[0] == 'y' && id[1] >= '1' && id[1] <= '3') {
            reject_prime(start);
            return derivative_var(id[1] - '0', start);
        }
        Fn f;
        if (id == "exp") f = Fn::Exp;
        else if (id == "ln") f = Fn::Ln;
        else if (id == "sin") f = Fn::Sin;
        else if (id == "cos") f = Fn::Cos;
        else throw SyntaxError(start, "a variable (t, y, y', y'') or function (exp, ln, sin, cos)");
        expect('(');
        Expr a = parse_expr();
        expect(')');
        return Expr::func(f, a);
    }

    void reject_prime(std::size_t start) {
        if (pos_ < text_.size() && text_[pos_] == '\'') throw SyntaxError(pos_, "an operator (' applies only to y)");
        (void)start;
    }

    Expr derivative_var(int order, std::size_t at) {
        switch (order) {
        case 0: return Expr::var(Var::Y);
        case 1: return Expr::var(Var::Y1);
        case 2: return Expr::var(Var::Y2);
        case 3:
            if (opt_.allow_y3) return Expr::var(Var::Y3);
            throw SyntaxError(at, "a variable of order at most y''");
        default: throw SyntaxError(at, "a variable of order at most y''");
        }
    }

    std::string_view text_;
    ParseOptions opt_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the expression grammar into canonical form. Throws SyntaxError.
inline Expr parse(std::string_view text, ParseOptions opt = {}) { return detail::Parser(text, opt).parse_all(); }

} // namespace exode

#endif
