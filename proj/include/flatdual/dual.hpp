#pragma once

/// \file
/// Flat arbitrary-order dual numbers.
///
/// A `DualN<Real>` of order n stores n + 1 complex coefficients a_0 .. a_n
/// with the multiplication table
///
///     e_i * e_j = (i + j)! / (i! j!) e_{i+j}   (zero when i + j > n)
///
/// so that evaluating an analytic f at the seed z0 + e_1 yields
/// a_k = f^(k)(z0). Note the convention: coefficients are raw derivatives,
/// *not* Taylor coefficients f^(k)/k!. The binomial weights live in the
/// product (Leibniz rule) instead.
///
/// Every value carries its own order. Binary operations require equal
/// orders and throw OrderMismatch otherwise; `resize` converts explicitly.
/// Scalars combined with a dual are promoted to a constant of the dual's order.
/// Poles and branch points are not trapped: coefficients become inf/NaN.

#include <flatdual/combinatorics.hpp>
#include <flatdual/config.hpp>
#include <flatdual/errors.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <ostream>
#include <string>
#include <type_traits>

namespace flatdual {

template <typename Real = default_real>
class DualN {
public:
    using real_type = Real;
    using Scalar = complex_t<Real>;
    using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    /// Order-0 zero.
    DualN() : c_(Coeffs::Zero(1)) {}

    /// Zero of the given order.
    explicit DualN(int order) : c_(Coeffs::Zero(checked_order(order) + 1)) {}

    /// Takes ownership of a coefficient vector of length order + 1.
    explicit DualN(Coeffs coeffs) : c_(std::move(coeffs))
    {
        if (c_.size() == 0) {
            throw InvalidOrder("DualN needs at least one coefficient");
        }
    }

    static DualN constant(Scalar c, int order)
    {
        DualN r(order);
        r.c_[0] = c;
        return r;
    }

    /// z0 + 1 e_1: the seed whose image under f carries f's derivative table.
    static DualN variable(Scalar z0, int order)
    {
        if (order < 1) {
            throw InvalidOrder("cannot seed a derivative direction at order " + std::to_string(order));
        }
        DualN r(order);
        r.c_[0] = z0;
        r.c_[1] = Scalar(1);
        return r;
    }

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }

    const Coeffs& coeffs() const noexcept { return c_; }

    Scalar value() const noexcept { return c_[0]; }

    // Unchecked access.
    const Scalar& operator[](int k) const noexcept { return c_[k]; }
    Scalar& operator[](int k) noexcept { return c_[k]; }

    /// Checked access to the k-th derivative component.
    Scalar part(int k) const
    {
        check_index(k);
        return c_[k];
    }

    /// Copy with the k-th component replaced.
    DualN with_part(int k, Scalar c) const
    {
        check_index(k);
        DualN r(*this);
        r.c_[k] = c;
        return r;
    }

    /// Truncates or zero-extends to order m.
    DualN resized(int m) const
    {
        DualN r(m);
        const auto n = std::min<Eigen::Index>(c_.size(), r.c_.size());
        r.c_.head(n) = c_.head(n);
        return r;
    }

    bool is_finite() const
    {
        return std::all_of(c_.data(), c_.data() + c_.size(),
                           [](const Scalar& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    }

    DualN& operator+=(const DualN& rhs)
    {
        require_same_order(*this, rhs);
        c_ += rhs.c_;
        return *this;
    }

    DualN& operator-=(const DualN& rhs)
    {
        require_same_order(*this, rhs);
        c_ -= rhs.c_;
        return *this;
    }

    DualN& operator*=(const DualN& rhs) { return *this = *this * rhs; }

    DualN& operator+=(const Scalar& s)
    {
        c_[0] += s;
        return *this;
    }

    DualN& operator-=(const Scalar& s)
    {
        c_[0] -= s;
        return *this;
    }

    DualN& operator*=(const Scalar& s)
    {
        c_ *= s;
        return *this;
    }

    DualN operator-() const { return DualN(Coeffs(-c_)); }

    /// Leibniz product: (ab)_k = sum_i C(k, i) a_i b_{k-i}.
    friend DualN operator*(const DualN& a, const DualN& b)
    {
        require_same_order(a, b);
        const int n = a.order();
        DualN r(n);
        for (int k = 0; k <= n; ++k) {
            r.c_[k] = leibniz_term(a, b, k);
        }
        return r;
    }

    /// Component k of a * b.
    static Scalar leibniz_term(const DualN& a, const DualN& b, int k)
    {
        Scalar sum(0);
        for (int i = 0; i <= k; ++i) {
            sum += binomial<Real>(k, i) * a.c_[i] * b.c_[k - i];
        }
        return sum;
    }

    friend DualN operator+(DualN a, const DualN& b) { return a += b; }
    friend DualN operator-(DualN a, const DualN& b) { return a -= b; }

    friend DualN operator+(DualN a, const Scalar& s) { return a += s; }
    friend DualN operator+(const Scalar& s, DualN a) { return a += s; }
    friend DualN operator-(DualN a, const Scalar& s) { return a -= s; }
    friend DualN operator-(const Scalar& s, const DualN& a) { return -a + s; }
    friend DualN operator*(DualN a, const Scalar& s) { return a *= s; }
    friend DualN operator*(const Scalar& s, DualN a) { return a *= s; }

    /// Exact componentwise equality; duals of different order are never equal.
    friend bool operator==(const DualN& a, const DualN& b)
    {
        return a.order() == b.order() && a.c_ == b.c_;
    }

    friend std::ostream& operator<<(std::ostream& os, const DualN& a)
    {
        os << '[';
        for (int k = 0; k <= a.order(); ++k) {
            os << (k ? ", " : "") << a.c_[k];
        }
        return os << ']';
    }

    static void require_same_order(const DualN& a, const DualN& b)
    {
        if (a.order() != b.order()) {
            throw OrderMismatch(a.order(), b.order());
        }
    }

private:
    static int checked_order(int order)
    {
        if (order < 0) {
            throw InvalidOrder("negative dual order " + std::to_string(order));
        }
        return order;
    }

    void check_index(int k) const
    {
        if (k < 0 || k > order()) {
            throw IndexOutOfRange("dual component " + std::to_string(k) + " outside 0.." + std::to_string(order()));
        }
    }

    Coeffs c_;
};

using Dual = DualN<default_real>;

// Mixed arithmetic with real and integer scalars promotes through complex_t<Real>.
template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator+(const DualN<Real>& a, T s)
{
    return a + complex_t<Real>(static_cast<Real>(s));
}

template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator+(T s, const DualN<Real>& a)
{
    return complex_t<Real>(static_cast<Real>(s)) + a;
}

template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator-(const DualN<Real>& a, T s)
{
    return a - complex_t<Real>(static_cast<Real>(s));
}

template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator-(T s, const DualN<Real>& a)
{
    return complex_t<Real>(static_cast<Real>(s)) - a;
}

template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator*(const DualN<Real>& a, T s)
{
    return a * complex_t<Real>(static_cast<Real>(s));
}

template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator*(T s, const DualN<Real>& a)
{
    return complex_t<Real>(static_cast<Real>(s)) * a;
}

template <typename Real>
DualN<Real> constant(complex_t<Real> c, int order)
{
    return DualN<Real>::constant(c, order);
}

inline Dual constant(double c, int order) { return Dual::constant(c, order); }

template <typename Real>
DualN<Real> seed_variable(complex_t<Real> z0, int order)
{
    return DualN<Real>::variable(z0, order);
}

inline Dual seed_variable(double z0, int order) { return Dual::variable(z0, order); }

template <typename Real>
complex_t<Real> get_part(const DualN<Real>& a, int k)
{
    return a.part(k);
}

template <typename Real>
DualN<Real> set_part(const DualN<Real>& a, int k, complex_t<Real> c)
{
    return a.with_part(k, c);
}

template <typename Real>
DualN<Real> resize(const DualN<Real>& a, int m)
{
    return a.resized(m);
}

template <typename Real>
DualN<Real> conjg(const DualN<Real>& a)
{
    return DualN<Real>(typename DualN<Real>::Coeffs(a.coeffs().conjugate()));
}

/// a^m for m >= 0 by binary powering over the Leibniz product.
template <typename Real>
DualN<Real> pow_int(const DualN<Real>& a, int m)
{
    if (m < 0) {
        throw std::invalid_argument("pow_int: negative exponent " + std::to_string(m));
    }
    auto result = DualN<Real>::constant(complex_t<Real>(1), a.order());
    auto base = a;
    while (m > 0) {
        if (m & 1) {
            result = result * base;
        }
        m >>= 1;
        if (m > 0) {
            base = base * base;
        }
    }
    return result;
}

}  // namespace flatdual
