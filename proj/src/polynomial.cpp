#include "condense/polynomial.hpp"

#include "condense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace condense {

namespace {

constexpr double kMergeDistance = 1e-7;

// Upper bound on the rounding error of Horner's scheme at x.
double evaluation_error_bound(std::span<const double> c, double x) {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * ax + std::abs(c[i]);
    return 8.0 * static_cast<double>(c.size()) * std::numeric_limits<double>::epsilon() * acc;
}

std::vector<double> derivative(std::span<const double> c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
    return d;
}

// Root of a polynomial known to be monotone on [lo, hi] with a sign change.
double bisect(std::span<const double> c, double lo, double hi) {
    double flo = evaluate_polynomial(c, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = evaluate_polynomial(c, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Roots of an exactly-degree-n polynomial (c.back() != 0).
std::vector<double> real_roots_exact_degree(std::span<const double> c) {
    const std::size_t n = c.size() - 1;
    if (n == 0) return {};
    if (n == 1) return {-c[0] / c[1]};

    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[i] / c[n]));
    bound += 1.0;

    const std::vector<double> dc = derivative(c);
    std::vector<double> critical = real_roots_exact_degree(dc);

    std::vector<double> knots;
    knots.push_back(-bound);
    for (double x : critical) {
        if (x > -bound && x < bound) knots.push_back(x);
    }
    knots.push_back(bound);

    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k];
        const double hi = knots[k + 1];
        const double flo = evaluate_polynomial(c, lo);
        const double fhi = evaluate_polynomial(c, hi);
        if (flo == 0.0) {
            roots.push_back(lo);
        } else if (fhi != 0.0 && (flo < 0.0) != (fhi < 0.0)) {
            roots.push_back(bisect(c, lo, hi));
        }
    }
    // Touching roots: critical points where q vanishes to rounding accuracy.
    for (double x : critical) {
        if (std::abs(evaluate_polynomial(c, x)) <= evaluation_error_bound(c, x)) {
            roots.push_back(x);
        }
    }
    const double last = evaluate_polynomial(c, bound);
    if (last == 0.0) roots.push_back(bound);

    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || r - merged.back() > kMergeDistance) merged.push_back(r);
    }
    return merged;
}

}  // namespace

double evaluate_polynomial(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

std::size_t trimmed_degree(std::span<const double> coeffs) {
    double scale = 0.0;
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw DomainError("polynomial coefficient is not finite");
        scale = std::max(scale, std::abs(c));
    }
    if (scale == 0.0) throw DegenerateError("polynomial is identically zero");
    std::size_t degree = coeffs.size() - 1;
    while (std::abs(coeffs[degree]) < kLeadingTrimTolerance * scale) --degree;
    return degree;
}

std::vector<double> polynomial_real_roots(std::span<const double> coeffs) {
    if (coeffs.empty()) throw DegenerateError("polynomial has no coefficients");
    const std::size_t degree = trimmed_degree(coeffs);
    return real_roots_exact_degree(coeffs.first(degree + 1));
}

}  // namespace condense
