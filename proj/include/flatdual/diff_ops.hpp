#pragma once

/// \file
/// Directional derivatives, gradient, Jacobian and Hessian of functions of
/// several dual variables, plus reductions over dual arrays.
///
/// All operators seed every coordinate at once: x_i = q_i + v_i e_1, so one
/// order-1 evaluation gives v . grad f and one order-2 evaluation gives
/// v^T H v. Mixed second directions come from the polarization identity
///
///     u^T H v = ( (u+v)^T H (u+v) - (u-v)^T H (u-v) ) / 4.
///
/// Field callables receive `std::span<const DualN<Real>>` and must be
/// reentrant.

#include <flatdual/dual.hpp>
#include <flatdual/errors.hpp>

#include <Eigen/Core>

#include <concepts>
#include <span>
#include <string>
#include <vector>

namespace Eigen {

// Lets Eigen matrices hold duals. Arithmetic on them goes through the
// dual_* free functions, which enforce matching orders.
template <typename Real>
struct NumTraits<flatdual::DualN<Real>> : GenericNumTraits<flatdual::DualN<Real>> {
    enum {
        IsComplex = 1,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 8,
        MulCost = 64
    };
};

}  // namespace Eigen

namespace flatdual {

template <typename Real>
using CVector = Eigen::Matrix<complex_t<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrix = Eigen::Matrix<complex_t<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using DualMatrix = Eigen::Matrix<DualN<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename F, typename Real>
concept scalar_field = std::invocable<const F&, std::span<const DualN<Real>>>
    && std::convertible_to<std::invoke_result_t<const F&, std::span<const DualN<Real>>>, DualN<Real>>;

template <typename F, typename Real>
concept vector_field = std::invocable<const F&, std::span<const DualN<Real>>>
    && std::convertible_to<std::invoke_result_t<const F&, std::span<const DualN<Real>>>, std::vector<DualN<Real>>>;

enum class DiffKind { gradient, jacobian, hessian, directional };

/// Operator output with the point it was evaluated at.
/// Shapes: gradient m x 1, jacobian n x m, hessian m x m.
template <typename Real = default_real>
struct DiffResult {
    DiffKind kind = DiffKind::gradient;
    CMatrix<Real> values;
    CVector<Real> point;

    friend bool operator==(const DiffResult& a, const DiffResult& b)
    {
        return a.kind == b.kind && a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols()
               && a.values == b.values && a.point.size() == b.point.size() && a.point == b.point;
    }
};

inline const char* to_string(DiffKind kind)
{
    switch (kind) {
    case DiffKind::gradient: return "gradient";
    case DiffKind::jacobian: return "jacobian";
    case DiffKind::hessian: return "hessian";
    case DiffKind::directional: return "directional";
    }
    return "unknown";
}

namespace detail {

inline void require_same_size(Eigen::Index a, Eigen::Index b, const char* what)
{
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " + std::to_string(b));
    }
}

// x_i = q_i + v_i e_1 at the given order.
template <typename Real>
std::vector<DualN<Real>> seed_along(const CVector<Real>& v, const CVector<Real>& q, int order)
{
    require_same_size(v.size(), q.size(), "direction and point");
    std::vector<DualN<Real>> x;
    x.reserve(static_cast<std::size_t>(q.size()));
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        DualN<Real> xi(order);
        xi[0] = q[i];
        xi[1] = v[i];
        x.push_back(std::move(xi));
    }
    return x;
}

template <typename Real>
CVector<Real> unit(Eigen::Index m, Eigen::Index i)
{
    CVector<Real> e = CVector<Real>::Zero(m);
    e[i] = complex_t<Real>(1);
    return e;
}

template <typename Real>
const DualN<Real>& checked_output(const DualN<Real>& y, int order)
{
    if (y.order() != order) {
        throw OrderMismatch(y.order(), order);
    }
    return y;
}

}  // namespace detail

/// v . grad f(q)
template <typename Real, typename F>
    requires scalar_field<F, Real>
complex_t<Real> d1fscalar(const F& f, const CVector<Real>& v, const CVector<Real>& q)
{
    const auto x = detail::seed_along(v, q, 1);
    const DualN<Real> y = f(std::span<const DualN<Real>>(x));
    return detail::checked_output(y, 1)[1];
}

/// v^T H(q) v
template <typename Real, typename F>
    requires scalar_field<F, Real>
complex_t<Real> d2fscalar(const F& f, const CVector<Real>& v, const CVector<Real>& q)
{
    const auto x = detail::seed_along(v, q, 2);
    const DualN<Real> y = f(std::span<const DualN<Real>>(x));
    return detail::checked_output(y, 2)[2];
}

/// u^T H(q) v by polarization.
template <typename Real, typename F>
    requires scalar_field<F, Real>
complex_t<Real> d2fscalar(const F& f, const CVector<Real>& u, const CVector<Real>& v, const CVector<Real>& q)
{
    detail::require_same_size(u.size(), v.size(), "d2fscalar directions");
    const CVector<Real> plus = u + v;
    const CVector<Real> minus = u - v;
    return (d2fscalar(f, plus, q) - d2fscalar(f, minus, q)) / Real(4);
}

/// J(q) v for f with n outputs.
template <typename Real, typename F>
    requires vector_field<F, Real>
CVector<Real> d1fvector(const F& f, const CVector<Real>& v, const CVector<Real>& q, int n)
{
    const auto x = detail::seed_along(v, q, 1);
    const std::vector<DualN<Real>> y = f(std::span<const DualN<Real>>(x));
    detail::require_same_size(static_cast<Eigen::Index>(y.size()), n, "vector field outputs");
    CVector<Real> jv(n);
    for (int i = 0; i < n; ++i) {
        jv[i] = detail::checked_output(y[static_cast<std::size_t>(i)], 1)[1];
    }
    return jv;
}

template <typename Real, typename F>
    requires scalar_field<F, Real>
CVector<Real> gradient(const F& f, const CVector<Real>& q)
{
    const Eigen::Index m = q.size();
    CVector<Real> g(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        g[i] = d1fscalar(f, detail::unit<Real>(m, i), q);
    }
    return g;
}

/// n x m Jacobian, one column per coordinate direction.
template <typename Real, typename F>
    requires vector_field<F, Real>
CMatrix<Real> jacobian(const F& f, const CVector<Real>& q, int n)
{
    const Eigen::Index m = q.size();
    CMatrix<Real> jac(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        jac.col(j) = d1fvector(f, detail::unit<Real>(m, j), q, n);
    }
    return jac;
}

/// m x m Hessian; the strict upper triangle is mirrored, so the result is
/// exactly symmetric.
template <typename Real, typename F>
    requires scalar_field<F, Real>
CMatrix<Real> hessian(const F& f, const CVector<Real>& q)
{
    const Eigen::Index m = q.size();
    CMatrix<Real> h(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const CVector<Real> ei = detail::unit<Real>(m, i);
        h(i, i) = d2fscalar(f, ei, q);
        for (Eigen::Index j = i + 1; j < m; ++j) {
            h(i, j) = d2fscalar(f, ei, detail::unit<Real>(m, j), q);
            h(j, i) = h(i, j);
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Reductions over dual arrays
// ---------------------------------------------------------------------------

/// Sum of all entries; an empty input gives the order-0 zero.
template <typename Real>
DualN<Real> dual_sum(std::span<const DualN<Real>> a)
{
    if (a.empty()) {
        return DualN<Real>();
    }
    DualN<Real> s = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
        s += a[i];
    }
    return s;
}

/// Product of all entries; an empty input gives the order-0 one.
template <typename Real>
DualN<Real> dual_product(std::span<const DualN<Real>> a)
{
    if (a.empty()) {
        return DualN<Real>::constant(complex_t<Real>(1), 0);
    }
    DualN<Real> p = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
        p = p * a[i];
    }
    return p;
}

template <typename Real>
DualN<Real> dual_sum(const std::vector<DualN<Real>>& a)
{
    return dual_sum(std::span<const DualN<Real>>(a));
}

template <typename Real>
DualN<Real> dual_product(const std::vector<DualN<Real>>& a)
{
    return dual_product(std::span<const DualN<Real>>(a));
}

template <typename Real>
DualMatrix<Real> dual_matmul(const DualMatrix<Real>& a, const DualMatrix<Real>& b)
{
    detail::require_same_size(a.cols(), b.rows(), "dual_matmul inner dimension");
    if (a.size() == 0 || b.size() == 0) {
        return DualMatrix<Real>(a.rows(), b.cols());
    }
    DualMatrix<Real> c(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            DualN<Real> s = a(i, 0) * b(0, j);
            for (Eigen::Index k = 1; k < a.cols(); ++k) {
                s += a(i, k) * b(k, j);
            }
            c(i, j) = std::move(s);
        }
    }
    return c;
}

/// Copy of `a` with component k of every entry set to c.
template <typename Real>
DualMatrix<Real> mset_fpart(int k, complex_t<Real> c, const DualMatrix<Real>& a)
{
    DualMatrix<Real> r = a;
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            r(i, j) = r(i, j).with_part(k, c);
        }
    }
    return r;
}

}  // namespace flatdual
