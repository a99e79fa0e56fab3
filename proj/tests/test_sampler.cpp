#include <gtest/gtest.h>

#include <exode/exode.hpp>

#include "support/corpus.hpp"

using namespace exode;

TEST(Equivalent, SimplifyIsSound) {
    Sampler s(1);
    Expr e = parse("(t + y)*(t - y) + exp(ln(y'))");
    EXPECT_TRUE(equivalent(simplify(e), e, s));
}

TEST(Equivalent, DistinctVariables) {
    Sampler s(1);
    EXPECT_FALSE(equivalent(Expr::var(Var::T), Expr::var(Var::Y), s));
}

TEST(Equivalent, UnexpandedPowersOfSums) {
    // simplify leaves (t + y)^2 alone, so only the sampler can see the identity.
    Sampler s(2);
    Expr a = parse("(t + y)^2");
    Expr b = parse("t^2 + 2*t*y + y^2");
    EXPECT_FALSE(a == b);
    EXPECT_TRUE(equivalent(a, b, s));
}

TEST(Equivalent, InsufficientSamples) {
    Sampler s(3);
    // ln of a negative value everywhere in the box.
    Expr bad = Expr::func(Fn::Ln, parse("-t"));
    EXPECT_THROW(equivalent(bad, Expr::num(0), s), InsufficientSamples);
}

TEST(Equivalent, GuardRedrawsNearSingularPoints) {
    Sampler s(4);
    s.box[0] = {0.5, 1.5};
    // 1/(t - 1) has a pole inside the box; points near it are skipped, not failed.
    Expr e = parse("(t - 1)^-1");
    EXPECT_TRUE(equivalent(e, simplify(e), s));
}

TEST(Equivalent, ReflexiveAndSymmetricOnCorpus) {
    auto corpus = fixtures::expression_corpus(21, 120);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        Sampler s(i);
        EXPECT_TRUE(equivalent(corpus[i], corpus[i], s));
        const Expr &other = corpus[(i + 1) % corpus.size()];
        Sampler a(i + 1000), b(i + 1000);
        EXPECT_EQ(equivalent(corpus[i], other, a), equivalent(other, corpus[i], b));
    }
}

// Distinct polynomials of total degree <= 8 in <= 4 variables whose difference vanishes on a
// hypersurface through the box. A single sample lands on it with probability zero, so 32 samples
// must always separate them.
TEST(Equivalent, SeparatesDistinctPolynomials) {
    const std::vector<std::pair<const char *, const char *>> pairs{
        {"(t - y)*(y' - y'')", "0"},
        {"t^4*y^4", "t^4*y^4 + (t - 1)^8"},
        {"(t + y + y' + y'')^2", "t^2 + y^2 + y'^2 + y''^2"},
        {"t^3*y^3*y'^2", "t^3*y^3*y'^2 + 10^-6*(t*y - y'*y'')"},
        {"(t - 3/2)^2*(y - 3/2)^2*(y' - 3/2)^2*(y'' - 3/2)^2", "0"},
    };
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (const auto &[a, b] : pairs) {
            Sampler s(seed);
            EXPECT_FALSE(equivalent(parse(a), parse(b), s)) << a << " vs " << b << " seed " << seed;
        }
    }
}

TEST(IsZero, SymbolicThenNumeric) {
    Sampler s(5);
    EXPECT_TRUE(is_zero(parse("t - t"), s));
    EXPECT_TRUE(is_zero(parse("(t + 1)^2 - t^2 - 2*t - 1"), s));
    EXPECT_FALSE(is_zero(parse("t"), s));
    EXPECT_TRUE(is_zero(parse("sin(t)^2 + cos(t)^2 - 1"), s));
}

TEST(Sampler, DeterministicAndDerivable) {
    Sampler a(9), b(9);
    for (int i = 0; i < 10; ++i) {
        JetPoint p = a.draw(), q = b.draw();
        EXPECT_EQ(p.t, q.t);
        EXPECT_EQ(*p.y3, *q.y3);
        EXPECT_GE(p.y1, 0.5);
        EXPECT_LE(p.y1, 2.5);
    }
    Sampler c = a.derive(3), d = a.derive(3), e = a.derive(4);
    EXPECT_EQ(c.draw().t, d.draw().t);
    EXPECT_NE(c.seed(), e.seed());
}
