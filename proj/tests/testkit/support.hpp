#pragma once

// Small helpers shared by the test executables: literal duals, seeded random
// inputs, and gtest assertions on complex values.

#include "oracles.hpp"

#include <flatdual/dual.hpp>

#include <gtest/gtest.h>

#include <complex>
#include <initializer_list>
#include <random>
#include <vector>

namespace flatdual::testkit {

inline Dual make_dual(std::initializer_list<C> values)
{
    Dual::Coeffs c(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const C& v : values) {
        c[i++] = v;
    }
    return Dual(c);
}

class Random {
public:
    explicit Random(unsigned seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

    /// Real and imaginary parts uniform in [-r, r].
    C complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

    std::vector<C> complex_vector(int n, double r = 1.0)
    {
        std::vector<C> out;
        for (int i = 0; i < n; ++i) {
            out.push_back(complex(r));
        }
        return out;
    }

    /// Dual with all order+1 coefficients drawn from the unit box.
    Dual dual(int order, double r = 1.0)
    {
        Dual::Coeffs c(order + 1);
        for (int k = 0; k <= order; ++k) {
            c[k] = complex(r);
        }
        return Dual(c);
    }

    std::mt19937& engine() { return gen_; }

private:
    std::mt19937 gen_;
};

/// Componentwise mixed relative check: |a_k - b_k| <= tol * max(|b_k|, 1).
inline ::testing::AssertionResult DualNear(const Dual& a, const Dual& b, double tol)
{
    if (a.order() != b.order()) {
        return ::testing::AssertionFailure() << "orders differ: " << a.order() << " vs " << b.order();
    }
    for (int k = 0; k <= a.order(); ++k) {
        const double err = rel_err(a[k], b[k], 1.0);
        if (!(err <= tol)) {
            return ::testing::AssertionFailure()
                   << "component " << k << ": " << a[k] << " vs " << b[k] << " (err " << err << ")";
        }
    }
    return ::testing::AssertionSuccess();
}

/// Relative check |a - b| <= tol * max(|b|, floor).
inline ::testing::AssertionResult ComplexNear(C a, C b, double tol, double floor = 1e-300)
{
    const double err = rel_err(a, b, floor);
    if (err <= tol) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << a << " vs " << b << " (rel err " << err << ")";
}

}  // namespace flatdual::testkit
