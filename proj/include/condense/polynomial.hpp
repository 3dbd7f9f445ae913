#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace condense {

/// Relative size below which leading coefficients are dropped.
inline constexpr double kLeadingTrimTolerance = 1e-12;

/// Degree after dropping leading coefficients with |c| < 1e-12 max|c|.
/// Coefficients are in ascending order: c[0] + c[1] x + ... + c[p] x^p.
/// Throws DegenerateError when every coefficient is zero.
std::size_t trimmed_degree(std::span<const double> coeffs);

/// Horner evaluation of an ascending-order polynomial.
double evaluate_polynomial(std::span<const double> coeffs, double x);

/// All real roots, ascending, merged when closer than 1e-7.
///
/// Roots are isolated by recursive derivative bracketing: the real roots of
/// q' split the line into monotone pieces, each of which holds at most one
/// root of q and is searched by bisection. Critical points where q vanishes
/// to rounding accuracy are reported as even-multiplicity roots.
std::vector<double> polynomial_real_roots(std::span<const double> coeffs);

}  // namespace condense
