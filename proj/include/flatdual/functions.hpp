#pragma once

/// \file
/// Elementary functions on flat duals.
///
/// Each function f is built from a primitive table z -> [f(z), ..., f^(n)(z)]
/// pushed through `lift`. Tables with a simple closed form (inv, exp, log,
/// sqrt, sin, cos, sinh, cosh) are written out directly. The inverse
/// trigonometric and hyperbolic tables are themselves dual computations: the
/// derivative of asin is 1/sqrt(1 - z^2), so evaluating that expression on
/// the seed z + e_1 of order n - 1 yields entries 1..n of the asin table.
///
/// Branch cuts follow std::complex (principal values; asin(1.1) has a
/// positive imaginary part). Derivative values exactly on a cut are whatever
/// the principal sqrt/log produce and are not guaranteed to match the side
/// chosen for the value.

#include <flatdual/chain_rule.hpp>
#include <flatdual/dual.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace flatdual {

namespace tables {

// z -> [1/z, -1/z^2, 2/z^3, ...]
struct inv_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        DualN<Real> t(n);
        t[0] = Real(1) / z;
        for (int k = 1; k <= n; ++k) {
            t[k] = -Real(k) * t[k - 1] / z;
        }
        return t;
    }
};

struct exp_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        using Coeffs = typename DualN<Real>::Coeffs;
        return DualN<Real>(Coeffs::Constant(n + 1, std::exp(z)));
    }
};

// Principal Log z, then (-1)^(k-1) (k-1)! z^-k.
struct log_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        DualN<Real> t(n);
        t[0] = std::log(z);
        if (n >= 1) {
            t[1] = Real(1) / z;
        }
        for (int k = 2; k <= n; ++k) {
            t[k] = -Real(k - 1) * t[k - 1] / z;
        }
        return t;
    }
};

// (1/2)(1/2 - 1)...(1/2 - k + 1) z^(1/2 - k), principal branch.
struct sqrt_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        DualN<Real> t(n);
        t[0] = std::sqrt(z);
        for (int k = 1; k <= n; ++k) {
            t[k] = (Real(0.5) - Real(k - 1)) * t[k - 1] / z;
        }
        return t;
    }
};

// sin(z + k pi/2) and cos(z + k pi/2), via the exact four-cycle.
struct sin_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        const complex_t<Real> cycle[4] = {std::sin(z), std::cos(z), -std::sin(z), -std::cos(z)};
        DualN<Real> t(n);
        for (int k = 0; k <= n; ++k) {
            t[k] = cycle[k % 4];
        }
        return t;
    }
};

struct cos_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        const complex_t<Real> cycle[4] = {std::cos(z), -std::sin(z), -std::cos(z), std::sin(z)};
        DualN<Real> t(n);
        for (int k = 0; k <= n; ++k) {
            t[k] = cycle[k % 4];
        }
        return t;
    }
};

struct sinh_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        const complex_t<Real> cycle[2] = {std::sinh(z), std::cosh(z)};
        DualN<Real> t(n);
        for (int k = 0; k <= n; ++k) {
            t[k] = cycle[k % 2];
        }
        return t;
    }
};

struct cosh_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        const complex_t<Real> cycle[2] = {std::cosh(z), std::sinh(z)};
        DualN<Real> t(n);
        for (int k = 0; k <= n; ++k) {
            t[k] = cycle[k % 2];
        }
        return t;
    }
};

}  // namespace tables

template <typename Real>
DualN<Real> inv(const DualN<Real>& a)
{
    return lift(tables::inv_table{}, a);
}

template <typename Real>
DualN<Real> exp(const DualN<Real>& a)
{
    return lift(tables::exp_table{}, a);
}

template <typename Real>
DualN<Real> log(const DualN<Real>& a)
{
    return lift(tables::log_table{}, a);
}

template <typename Real>
DualN<Real> sqrt(const DualN<Real>& a)
{
    return lift(tables::sqrt_table{}, a);
}

template <typename Real>
DualN<Real> sin(const DualN<Real>& a)
{
    return lift(tables::sin_table{}, a);
}

template <typename Real>
DualN<Real> cos(const DualN<Real>& a)
{
    return lift(tables::cos_table{}, a);
}

template <typename Real>
DualN<Real> sinh(const DualN<Real>& a)
{
    return lift(tables::sinh_table{}, a);
}

template <typename Real>
DualN<Real> cosh(const DualN<Real>& a)
{
    return lift(tables::cosh_table{}, a);
}

template <typename Real>
DualN<Real> operator/(const DualN<Real>& a, const DualN<Real>& b)
{
    return a * inv(b);
}

template <typename Real>
DualN<Real> operator/(const DualN<Real>& a, const complex_t<Real>& s)
{
    return a * (Real(1) / s);
}

template <typename Real>
DualN<Real> operator/(const complex_t<Real>& s, const DualN<Real>& b)
{
    return s * inv(b);
}

template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator/(const DualN<Real>& a, T s)
{
    return a / complex_t<Real>(static_cast<Real>(s));
}

template <typename Real, typename T>
    requires std::is_arithmetic_v<T>
DualN<Real> operator/(T s, const DualN<Real>& b)
{
    return complex_t<Real>(static_cast<Real>(s)) / b;
}

/// a^b = exp(b log a) on the principal branch.
template <typename Real>
DualN<Real> pow(const DualN<Real>& a, const DualN<Real>& b)
{
    return exp(b * log(a));
}

template <typename Real>
DualN<Real> pow(const DualN<Real>& a, const complex_t<Real>& s)
{
    return exp(s * log(a));
}

template <typename Real>
DualN<Real> pow(const complex_t<Real>& s, const DualN<Real>& b)
{
    return exp(b * std::log(s));
}

/// sqrt(a * a), not sqrt(a * conj(a)): the analytic continuation of |x|
/// used with complex-step methods. Agrees with |x| on the positive real axis.
template <typename Real>
DualN<Real> absx(const DualN<Real>& a)
{
    return sqrt(a * a);
}

template <typename Real>
DualN<Real> tan(const DualN<Real>& a)
{
    return sin(a) * inv(cos(a));
}

template <typename Real>
DualN<Real> tanh(const DualN<Real>& a)
{
    return sinh(a) * inv(cosh(a));
}

namespace detail {

// z + e_1 truncated to `order`; unlike DualN::variable this allows order 0.
template <typename Real>
DualN<Real> identity_dual(complex_t<Real> z, int order)
{
    DualN<Real> w(order);
    w[0] = z;
    if (order >= 1) {
        w[1] = complex_t<Real>(1);
    }
    return w;
}

// Table whose entry 0 is `value` and entries 1..n are the derivative dual
// `deriv(z + e_1)` of order n - 1, shifted up by one.
template <typename Real, typename Deriv>
DualN<Real> table_from_derivative(complex_t<Real> value, complex_t<Real> z, int n, Deriv&& deriv)
{
    DualN<Real> t(n);
    t[0] = value;
    if (n >= 1) {
        const DualN<Real> d = deriv(identity_dual(z, n - 1));
        for (int k = 1; k <= n; ++k) {
            t[k] = d[k - 1];
        }
    }
    return t;
}

}  // namespace detail

namespace tables {

// D asin = 1/sqrt(1 - z^2)
struct asin_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        return detail::table_from_derivative<Real>(std::asin(z), z, n, [](const DualN<Real>& w) {
            return inv(sqrt(Real(1) - w * w));
        });
    }
};

// D acos = -1/sqrt(1 - z^2)
struct acos_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        return detail::table_from_derivative<Real>(std::acos(z), z, n, [](const DualN<Real>& w) {
            return -inv(sqrt(Real(1) - w * w));
        });
    }
};

// D atan = 1/(1 + z^2)
struct atan_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        return detail::table_from_derivative<Real>(std::atan(z), z, n, [](const DualN<Real>& w) {
            return inv(Real(1) + w * w);
        });
    }
};

// D asinh = 1/sqrt(1 + z^2)
struct asinh_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        return detail::table_from_derivative<Real>(std::asinh(z), z, n, [](const DualN<Real>& w) {
            return inv(sqrt(Real(1) + w * w));
        });
    }
};

// D acosh = 1/(sqrt(z - 1) sqrt(z + 1)); the split product matches the
// principal acosh on the whole plane, whereas 1/sqrt(z^2 - 1) flips sign for Re z < 0.
struct acosh_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        return detail::table_from_derivative<Real>(std::acosh(z), z, n, [](const DualN<Real>& w) {
            return inv(sqrt(w - Real(1)) * sqrt(w + Real(1)));
        });
    }
};

// D atanh = 1/(1 - z^2)
struct atanh_table {
    template <typename Real>
    DualN<Real> operator()(complex_t<Real> z, int n) const
    {
        return detail::table_from_derivative<Real>(std::atanh(z), z, n, [](const DualN<Real>& w) {
            return inv(Real(1) - w * w);
        });
    }
};

}  // namespace tables

template <typename Real>
DualN<Real> asin(const DualN<Real>& a)
{
    return lift(tables::asin_table{}, a);
}

template <typename Real>
DualN<Real> acos(const DualN<Real>& a)
{
    return lift(tables::acos_table{}, a);
}

template <typename Real>
DualN<Real> atan(const DualN<Real>& a)
{
    return lift(tables::atan_table{}, a);
}

template <typename Real>
DualN<Real> asinh(const DualN<Real>& a)
{
    return lift(tables::asinh_table{}, a);
}

template <typename Real>
DualN<Real> acosh(const DualN<Real>& a)
{
    return lift(tables::acosh_table{}, a);
}

template <typename Real>
DualN<Real> atanh(const DualN<Real>& a)
{
    return lift(tables::atanh_table{}, a);
}

/// Two-argument arctangent.
///
/// Component 0 follows the quadrant of the real parts: for real inputs it is
/// exactly std::atan2, otherwise atan(y0/x0) shifted by +-pi when Re x0 < 0.
/// Higher components are those of atan(y/x), or of +-pi/2 - atan(x/y) when
/// x0 == 0, so they stay finite on the vertical ray. Both arguments zero
/// gives NaN everywhere.
template <typename Real>
DualN<Real> atan2(const DualN<Real>& y, const DualN<Real>& x)
{
    using C = complex_t<Real>;
    DualN<Real>::require_same_order(y, x);
    const C y0 = y.value();
    const C x0 = x.value();
    const C zero(0);

    if (x0 == zero && y0 == zero) {
        const Real nan = std::numeric_limits<Real>::quiet_NaN();
        using Coeffs = typename DualN<Real>::Coeffs;
        return DualN<Real>(Coeffs::Constant(y.order() + 1, C(nan, nan)));
    }

    DualN<Real> r;
    C value;
    if (x0 == zero) {
        const Real half_pi = std::numbers::pi_v<Real> / 2;
        const Real sign = y0.real() < 0 ? Real(-1) : Real(1);
        r = -atan(x / y);
        value = sign * half_pi + r[0];
    } else {
        r = atan(y / x);
        value = r[0];
        if (x0.real() < 0) {
            value += y0.real() < 0 ? -std::numbers::pi_v<Real> : std::numbers::pi_v<Real>;
        }
    }
    if (x0.imag() == 0 && y0.imag() == 0) {
        value = C(std::atan2(y0.real(), x0.real()));
    }
    r[0] = value;
    return r;
}

template <typename Real>
DualN<Real> atan2(const DualN<Real>& y, const complex_t<Real>& x)
{
    return atan2(y, DualN<Real>::constant(x, y.order()));
}

template <typename Real>
DualN<Real> atan2(const complex_t<Real>& y, const DualN<Real>& x)
{
    return atan2(DualN<Real>::constant(y, x.order()), x);
}

}  // namespace flatdual
