#pragma once

/// \file
/// Umbrella header: flat arbitrary-order dual numbers, the elementary-function
/// catalogue and the differential operators.
///
/// \code
/// using namespace flatdual;
/// auto x = Dual::variable({1.1, 2.2}, 5);
/// auto f = pow(sin(x), log(x * x));
/// // f[k] == d^k/dz^k sin(z)^log(z^2) at z = 1.1 + 2.2i, k = 0..5
/// \endcode

#include <flatdual/chain_rule.hpp>
#include <flatdual/combinatorics.hpp>
#include <flatdual/config.hpp>
#include <flatdual/diff_ops.hpp>
#include <flatdual/dual.hpp>
#include <flatdual/errors.hpp>
#include <flatdual/functions.hpp>
