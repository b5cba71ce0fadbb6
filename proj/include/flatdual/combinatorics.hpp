#pragma once

/// \file
/// Binomial coefficients and partial Bell polynomials over complex arguments.

#include <flatdual/config.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace flatdual {

/// C(m, n) in floating point via the multiplicative formula.
///
/// Exact for small arguments (Pascal's rule holds bit-for-bit through
/// m = 30); relative error stays under 1e-12 up to m = 200. Returns 0 when
/// n < 0, n > m or m < 0 instead of throwing.
template <typename Real = default_real>
Real binomial(int m, int n)
{
    if (m < 0 || n < 0 || n > m) {
        return Real(0);
    }
    const int k = std::min(n, m - n);
    Real r(1);
    for (int i = 1; i <= k; ++i) {
        r = r * Real(m - k + i) / Real(i);
    }
    return r;
}

/// Dynamic-programming table of partial Bell polynomials B_{i,j}(x), i <= n, j <= k.
///
/// Cell (i, j) holds B_{i,j}(x_1, x_2, ...) where x_1 is `x[0]`. Arguments
/// beyond `x.size()` are treated as zero. Building the table for (n, n) once
/// yields every B_{i,j} needed by a full Faa di Bruno expansion of order n.
template <typename Real = default_real>
class BellTable {
public:
    using Scalar = complex_t<Real>;
    using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BellTable(std::span<const Scalar> x, int n, int k)
    {
        if (n < 0 || k < 0) {
            throw std::invalid_argument("bell polynomial indices must be non-negative (n=" + std::to_string(n)
                                        + ", k=" + std::to_string(k) + ")");
        }
        dp_ = Table::Zero(n + 1, k + 1);
        dp_(0, 0) = Scalar(1);
        if (n == 0 || k == 0 || x.empty()) {
            return;
        }

        // One zero-padded copy of the arguments; cell (nn, kk) reads x_1 .. x_{nn-kk+1}.
        const auto padded_len = std::max<std::size_t>(static_cast<std::size_t>(n), x.size());
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> xs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(
            static_cast<Eigen::Index>(padded_len));
        std::copy(x.begin(), x.end(), xs.data());

        for (int nn = 1; nn <= n; ++nn) {
            for (int kk = 1; kk <= k; ++kk) {
                Scalar sum(0);
                for (int ii = 0; ii <= nn - kk; ++ii) {
                    sum += binomial<Real>(nn - 1, ii) * xs[ii] * dp_(nn - ii - 1, kk - 1);
                }
                dp_(nn, kk) = sum;
            }
        }
    }

    Scalar operator()(int n, int k) const { return dp_(n, k); }

    int max_n() const { return static_cast<int>(dp_.rows()) - 1; }
    int max_k() const { return static_cast<int>(dp_.cols()) - 1; }

    const Table& table() const { return dp_; }

private:
    Table dp_;
};

/// Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).
///
/// B_{0,0} = 1, B_{n,0} = 0 for n >= 1, B_{0,k} = 0 for k >= 1. Short `x`
/// is zero-padded. Throws std::invalid_argument for negative n or k.
template <typename Real = default_real>
complex_t<Real> bell_partial(int n, int k, std::type_identity_t<std::span<const complex_t<Real>>> x)
{
    if (n < 0 || k < 0) {
        throw std::invalid_argument("bell_partial: negative index");
    }
    if (n == 0 && k == 0) {
        return complex_t<Real>(1);
    }
    if (x.empty()) {
        return complex_t<Real>(0);
    }
    return BellTable<Real>(x, n, k)(n, k);
}

}  // namespace flatdual
