#pragma once

/// \file
/// Faa di Bruno chain rule on flat duals.
///
/// A primitive table for an elementary f is any callable `table(z, n)` that
/// returns the dual [f(z), f'(z), ..., f^(n)(z)] of order n. `lift` turns it
/// into the full dual extension g -> f(g) using
///
///     D^n f(g) = sum_{k=1..n} f^(k)(g_0) B_{n,k}(g_1, ..., g_{n-k+1}).
///
/// Tables must be pure: they may be called concurrently and repeatedly, and
/// entry k must not depend on the requested order.

#include <flatdual/combinatorics.hpp>
#include <flatdual/dual.hpp>
#include <flatdual/errors.hpp>

#include <concepts>
#include <functional>
#include <span>
#include <string>

namespace flatdual {

template <typename F, typename Real>
concept primitive_table = std::invocable<const F&, complex_t<Real>, int>
    && std::convertible_to<std::invoke_result_t<const F&, complex_t<Real>, int>, DualN<Real>>;

/// Type-erased table, for registering user primitives at runtime.
template <typename Real = default_real>
using PrimitiveTable = std::function<DualN<Real>(complex_t<Real>, int)>;

namespace detail {

template <typename Real, typename F>
DualN<Real> evaluate_table(const F& table, complex_t<Real> z, int n)
{
    DualN<Real> t = table(z, n);
    if (t.order() < n) {
        throw InvalidOrder("primitive table returned order " + std::to_string(t.order()) + ", requested "
                           + std::to_string(n));
    }
    return t;
}

}  // namespace detail

/// n-th derivative of f(g) given f's primitive table and the dual g.
///
/// Exposed for users who dualize their own functions; `lift` is the
/// everyday entry point. Throws InvalidOrder unless 0 <= n <= g.order().
template <typename Real, typename F>
    requires primitive_table<F, Real>
complex_t<Real> dnd(const F& table, const DualN<Real>& g, int n)
{
    if (n < 0 || n > g.order()) {
        throw InvalidOrder("dnd: derivative order " + std::to_string(n) + " outside 0.."
                           + std::to_string(g.order()));
    }
    const auto fvd = detail::evaluate_table<Real>(table, g.value(), n);
    if (n == 0) {
        return fvd[0];
    }
    complex_t<Real> sum(0);
    for (int k = 1; k <= n; ++k) {
        // g_1 .. g_{n-k+1}, viewed in place.
        const std::span<const complex_t<Real>> slice(g.coeffs().data() + 1, static_cast<std::size_t>(n - k + 1));
        sum += fvd[k] * bell_partial<Real>(n, k, slice);
    }
    return sum;
}

/// f(g) as a dual of g's order: component k equals dnd(table, g, k).
///
/// One Bell table of size (n+1)^2 is shared by all components; every cell is
/// computed by exactly the same operations `dnd` performs, so the results
/// agree bit for bit.
template <typename Real, typename F>
    requires primitive_table<F, Real>
DualN<Real> lift(const F& table, const DualN<Real>& g)
{
    const int n = g.order();
    const auto fvd = detail::evaluate_table<Real>(table, g.value(), n);
    DualN<Real> r(n);
    r[0] = fvd[0];
    if (n == 0) {
        return r;
    }
    const std::span<const complex_t<Real>> x(g.coeffs().data() + 1, static_cast<std::size_t>(n));
    const BellTable<Real> bell(x, n, n);
    for (int k = 1; k <= n; ++k) {
        complex_t<Real> sum(0);
        for (int j = 1; j <= k; ++j) {
            sum += fvd[j] * bell(k, j);
        }
        r[k] = sum;
    }
    return r;
}

}  // namespace flatdual
