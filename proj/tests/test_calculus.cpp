#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <exode/exode.hpp>

#include "support/corpus.hpp"

using namespace exode;

TEST(Partial, Examples) {
    EXPECT_EQ(partial(parse("(y')^-2"), Var::Y1), parse("-2*(y')^-3"));
    EXPECT_EQ(partial(parse("t*y^2"), Var::Y), parse("2*t*y"));
    EXPECT_EQ(partial(parse("exp(t*y)"), Var::T), parse("y*exp(t*y)"));
    EXPECT_EQ(partial(parse("ln(y'')"), Var::Y2), parse("(y'')^-1"));
    EXPECT_EQ(partial(parse("sin(2*t)"), Var::T), parse("2*cos(2*t)"));
    EXPECT_EQ(partial(parse("cos(y)"), Var::Y), parse("-sin(y)"));
    EXPECT_EQ(partial(parse("t^3 + y"), Var::Y2), Expr::num(0));
}

TEST(TotalDerivative, Examples) {
    EXPECT_EQ(total_derivative(parse("y''")), parse("y'''", {true}));
    EXPECT_EQ(total_derivative(parse("t*y")), parse("y + t*y'"));
    // Ψ = t + y'' - y*(y')^-2 gives the multiplied first example.
    Expr lhs = total_derivative(parse("t + y'' - y*(y')^-2"));
    EXPECT_EQ(lhs, parse("1 + y''' - (y')^-1 + 2*y*y''*(y')^-3", {true}));
}

TEST(TotalDerivative, RejectsY3) {
    EXPECT_THROW(total_derivative(parse("y'''", {true})), ContainsY3);
}

TEST(Antiderivative, Examples) {
    Antiderivative a = antiderivative(parse("y'^-3"), Var::Y1);
    ASSERT_TRUE(a.supported);
    EXPECT_EQ(a.result, parse("-1/2*(y')^-2"));

    a = antiderivative(Expr::num(1), Var::T);
    ASSERT_TRUE(a.supported);
    EXPECT_EQ(a.result, parse("t"));

    a = antiderivative(parse("t^-1"), Var::T);
    ASSERT_TRUE(a.supported);
    EXPECT_EQ(a.result, parse("ln(t)"));

    a = antiderivative(parse("exp(y*t)"), Var::T);
    ASSERT_TRUE(a.supported);
    EXPECT_EQ(a.result, parse("y^-1*exp(t*y)"));

    a = antiderivative(parse("3*y*cos(2*t + 1) + t^(1/2)"), Var::T);
    ASSERT_TRUE(a.supported);
    EXPECT_EQ(a.result, parse("3/2*y*sin(2*t + 1) + 2/3*t^(3/2)"));

    EXPECT_FALSE(antiderivative(parse("exp(t^2)"), Var::T).supported);
    EXPECT_FALSE(antiderivative(parse("t*exp(t)"), Var::T).supported);
    EXPECT_FALSE(antiderivative(parse("ln(t)"), Var::T).supported);
}

TEST(DefiniteIntegral, Examples) {
    const Expr t = Expr::var(Var::T);
    const Expr t0 = Expr::num(1);
    EXPECT_EQ(definite_integral(Expr::num(1), Var::T, t0, t), parse("t - 1"));
    EXPECT_EQ(definite_integral(parse("t*y"), Var::T, t, t), Expr::num(0));
    EXPECT_THROW(definite_integral(parse("exp(t^2)"), Var::T, t0, t), UnsupportedIntegrand);
}

TEST(DefiniteIntegral, Example1SecondTerm) {
    // ∫_{y0'}^{y'} 2*y0*ξ^-3 dξ = y0*((y0')^-2 - (y')^-2)
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(1, 9);
    for (int i = 0; i < 10; ++i) {
        Rational y0(d(rng), d(rng)), y10(d(rng), d(rng));
        Expr got = definite_integral(Expr::num(2 * y0) * parse("y'^-3"), Var::Y1, Expr::num(y10), Expr::var(Var::Y1));
        Expr want = Expr::num(y0) * (Expr::num(1 / (y10 * y10)) - parse("y'^-2"));
        EXPECT_EQ(got, want) << print(got);
    }
}

TEST(CalculusProperty, PartialMatchesFiniteDifference) {
    Sampler s(23);
    const double h = 1e-5;
    int checked = 0;
    auto corpus = fixtures::expression_corpus(31, 100);
    for (std::size_t n = 0; n < corpus.size(); ++n) {
        const Expr &e = corpus[n];
        const Var v = kJetVars[n % 4];
        Expr d = partial(e, v);
        for (int i = 0; i < 32; ++i) {
            JetPoint p = s.draw();
            JetPoint lo = p, hi = p;
            lo.set(v, p[v] - h);
            hi.set(v, p[v] + h);
            double fd, exact;
            try {
                fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
                exact = eval(d, p);
            } catch (const DomainError &) {
                continue;
            }
            EXPECT_LE(std::abs(fd - exact), 1e-6 * std::max(1.0, std::abs(exact))) << print(e) << " d/d" << var_name(v);
            ++checked;
        }
    }
    EXPECT_GT(checked, 2500);
}

TEST(CalculusProperty, FundamentalTheorem) {
    Sampler s(5);
    for (const auto &[e, v] : fixtures::integrand_corpus(41, 100)) {
        Antiderivative a = antiderivative(e, v);
        if (!a.supported) continue;
        EXPECT_TRUE(equivalent(partial(a.result, v), e, s)) << print(e);
    }
}

TEST(CalculusProperty, Linearity) {
    auto corpus = fixtures::expression_corpus(43, 60);
    Sampler s(6);
    for (std::size_t i = 0; i + 1 < corpus.size(); i += 2) {
        for (Var v : kJetVars) {
            Expr lhs = partial(Expr::num(3) * corpus[i] - Expr::num(Rational(1, 2)) * corpus[i + 1], v);
            Expr rhs = Expr::num(3) * partial(corpus[i], v) - Expr::num(Rational(1, 2)) * partial(corpus[i + 1], v);
            EXPECT_TRUE(equivalent(lhs, rhs, s));
        }
    }
}

TEST(CalculusProperty, MixedPartialsCommute) {
    Sampler s(7);
    for (const Expr &e : fixtures::expression_corpus(47, 60)) {
        for (Var a : kJetVars)
            for (Var b : kJetVars) {
                if (a >= b) continue;
                EXPECT_TRUE(equivalent(partial(partial(e, a), b), partial(partial(e, b), a), s)) << print(e);
            }
    }
}
