#include <gtest/gtest.h>

#include <random>

#include <exode/exode.hpp>

#include "support/corpus.hpp"

using namespace exode;

namespace {

Equation eq(const char *f3, const char *f2, const char *f1, const char *f0) {
    return Equation(parse(f3), parse(f2), parse(f1), parse(f0));
}

// The first example multiplied by (y')^-3.
Equation example1_multiplied() { return eq("1", "2*y*(y')^-3", "-(y')^-2", "1"); }

} // namespace

TEST(Equation, Validation) {
    EXPECT_THROW(eq("0", "1", "1", "1"), InvalidEquation);
    EXPECT_THROW(eq("t - t", "1", "1", "1"), InvalidEquation);
    EXPECT_THROW(Equation(parse("1"), parse("y'''", {true}), parse("1"), parse("1")), InvalidEquation);
    Sampler s(1);
    EXPECT_THROW(Equation::checked(parse("(t + 1)^2 - t^2 - 2*t - 1"), parse("1"), parse("1"), parse("1"), s), InvalidEquation);
}

TEST(CheckExact, Example1FailsThreeConditions) {
    Sampler s(1);
    ExactnessReport r = check_exact(eq("y'^3", "2*y", "-y'", "y'^3"), s);
    EXPECT_FALSE(r.exact());
    for (const char *id : {"i", "ii", "vi"}) EXPECT_EQ(r[id].verdict, Verdict::SymbolicPass) << id;
    for (const char *id : {"iii", "iv", "v"}) EXPECT_EQ(r[id].verdict, Verdict::Fail) << id;
}

TEST(CheckExact, MultipliedExample1Passes) {
    Sampler s(1);
    ExactnessReport r = check_exact(example1_multiplied(), s);
    EXPECT_TRUE(r.exact());
    EXPECT_TRUE(r.symbolic());
    EXPECT_EQ(r["v"].lhs, parse("2*(y')^-3"));
    EXPECT_EQ(r["v"].rhs, parse("2*(y')^-3"));
}

TEST(CheckExact, LinearInstance) {
    Sampler s(1);
    EXPECT_TRUE(check_exact(eq("1", "1", "t", "y"), s).symbolic());
    EXPECT_FALSE(check_exact(eq("t", "t", "t^2", "t*y"), s).exact());
}

TEST(CheckExact, NumericPass) {
    // The double-angle identity is only seen by sampling.
    Sampler s(1);
    ExactnessReport r = check_exact(eq("1", "0", "0", "sin(2*y'') - 2*sin(y'')*cos(y'')"), s);
    EXPECT_EQ(r["i"].verdict, Verdict::NumericPass);
    EXPECT_TRUE(r.exact());
    EXPECT_FALSE(r.symbolic());
}

TEST(FirstIntegral, Example1) {
    Sampler s(2);
    FirstIntegral fi = first_integral(example1_multiplied(), BasePoint{}, s);
    EXPECT_EQ(fi.psi, parse("t + y'' - y*(y')^-2 - 1"));
    EXPECT_TRUE(verify_first_integral(example1_multiplied(), fi, s));
}

TEST(FirstIntegral, ThirdDerivativeOnly) {
    Sampler s(2);
    FirstIntegral fi = first_integral(eq("1", "0", "0", "0"), BasePoint{}, s);
    EXPECT_EQ(fi.psi, parse("y'' - 1"));
}

TEST(FirstIntegral, OriginBase) {
    Sampler s(2);
    FirstIntegral fi = first_integral(eq("1", "0", "0", "2*t"), BasePoint{0, 0, 0, 0}, s);
    EXPECT_EQ(fi.psi, parse("t^2 + y''"));
}

TEST(FirstIntegral, Errors) {
    Sampler s(2);
    EXPECT_THROW(first_integral(eq("y'^3", "2*y", "-y'", "y'^3"), BasePoint{}, s), NotExact);
    EXPECT_THROW(first_integral(eq("1", "0", "0", "exp(t^2)"), BasePoint{}, s), UnsupportedIntegrand);
    EXPECT_THROW(first_integral(example1_multiplied(), BasePoint{1, 1, 0, 1}, s), InvalidEquation);
}

TEST(Verify, RejectsWrongPsi) {
    Sampler s(3);
    Equation e = eq("1", "0", "0", "0");
    EXPECT_FALSE(verify_first_integral(e, {parse("y'' + t"), BasePoint{}}, s));
    EXPECT_TRUE(verify_first_integral(e, {parse("y'' + 5"), BasePoint{}}, s));
    EXPECT_FALSE(verify_first_integral(e, {parse("y'''", {true}), BasePoint{}}, s));
}

TEST(ExactnessProperty, RandomPsiRoundTrip) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 40; ++i) {
        Expr psi = fixtures::random_psi(rng);
        Equation e = fixtures::equation_from_psi(psi);
        Sampler s(i);
        ASSERT_TRUE(check_exact(e, s).exact()) << print(psi);
        FirstIntegral fi = first_integral(e, BasePoint{}, s);
        // Ψ and the recovered integral differ by a constant.
        Expr diff = fi.psi - psi;
        for (Var v : kJetVars) EXPECT_TRUE(is_zero(partial(diff, v), s)) << print(psi) << " vs " << print(fi.psi);
        EXPECT_TRUE(verify_first_integral(e, fi, s));
    }
}

TEST(ExactnessProperty, InvariantUnderConstantScaling) {
    std::mt19937_64 rng(103);
    for (int i = 0; i < 20; ++i) {
        Expr psi = fixtures::random_psi(rng);
        Equation e = fixtures::equation_from_psi(psi);
        Expr c = Expr::num(Rational(fixtures::uniform_int(rng, 1, 9), fixtures::uniform_int(rng, 1, 9)) * (i % 2 ? -1 : 1));
        Equation scaled(c * e.f3(), c * e.f2(), c * e.f1(), c * e.f0());
        Sampler s(i);
        EXPECT_TRUE(check_exact(scaled, s).exact());
        FirstIntegral a = first_integral(e, BasePoint{}, s);
        FirstIntegral b = first_integral(scaled, BasePoint{}, s);
        EXPECT_TRUE(equivalent(b.psi, c * a.psi, s));
    }
}

TEST(ExactnessProperty, BasePointChangesOnlyTheConstant) {
    std::mt19937_64 rng(107);
    for (int i = 0; i < 20; ++i) {
        Equation e = fixtures::equation_from_psi(fixtures::random_psi(rng));
        Sampler s(i);
        FirstIntegral a = first_integral(e, BasePoint{1, 1, 1, 1}, s);
        FirstIntegral b = first_integral(e, BasePoint{2, Rational(3, 2), Rational(1, 2), 2}, s);
        Expr diff = a.psi - b.psi;
        for (Var v : kJetVars) EXPECT_TRUE(is_zero(partial(diff, v), s));
        EXPECT_NEAR(eval(a.psi, a.base.point()), 0.0, 1e-12);
        EXPECT_NEAR(eval(b.psi, b.base.point()), 0.0, 1e-12);
    }
}
