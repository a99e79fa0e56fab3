#ifndef EXODE_SAMPLER_HPP
#define EXODE_SAMPLER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "errors.hpp"
#include "eval.hpp"
#include "simplify.hpp"

namespace exode {

struct Interval {
    double lo = 0.5;
    double hi = 2.5;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Random points for numeric identity testing. Owns its RNG; not meant to be shared across threads.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed = 0) : seed_(seed), rng_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent sampler for a sub-task, reproducible from (seed, salt).
    Sampler derive(std::uint64_t salt) const {
        Sampler s = *this;
        s.seed_ = seed_ * 0x9E3779B97F4A7C15ull + salt + 1;
        s.rng_.seed(s.seed_);
        return s;
    }

    double uniform(const Interval &iv) { return std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng_); }

    double uniform(Var v) { return uniform(box[static_cast<std::size_t>(v)]); }

    JetPoint draw() {
        JetPoint p;
        p.t = uniform(Var::T);
        p.y = uniform(Var::Y);
        p.y1 = uniform(Var::Y1);
        p.y2 = uniform(Var::Y2);
        p.y3 = uniform(Var::Y3);
        return p;
    }

    std::mt19937_64 &rng() { return rng_; }

    std::array<Interval, 5> box{};  // indexed by Var
    double guard = 1e-6;
    int samples = 32;
    double tol = 1e-9;
    int max_oversampling = 10;

private:
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

inline bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Randomised identity test: e1 and e2 agree at s.samples admissible points.
inline bool equivalent(const Expr &e1, const Expr &e2, Sampler &s) {
    if (e1 == e2) return true;
    const int budget = s.samples * s.max_oversampling;
    int accepted = 0;
    for (int attempt = 0; attempt < budget && accepted < s.samples; ++attempt) {
        JetPoint p = s.draw();
        double a, b;
        try {
            a = eval(e1, p, s.guard);
            b = eval(e2, p, s.guard);
        } catch (const DomainError &) {
            continue;
        }
        if (!close(a, b, s.tol)) return false;
        ++accepted;
    }
    if (accepted < s.samples) throw InsufficientSamples("could not find enough admissible sample points");
    return true;
}

/// Zero test: symbolic first, then numeric.
inline bool is_zero(const Expr &e, Sampler &s) {
    Expr r = simplify(e);
    if (r.is_zero()) return true;
    if (r.is_const()) return false;
    return equivalent(r, Expr::num(0), s);
}

} // namespace exode

#endif
