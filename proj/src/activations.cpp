#include "condense/activations.hpp"

#include "condense/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace condense {

namespace {

void require_finite(double z) {
    if (!std::isfinite(z)) {
        throw DomainError("activation evaluated at non-finite input");
    }
}

double stable_sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double ez = std::exp(z);
    return ez / (1.0 + ez);
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

ActivationSpec::ActivationSpec(ActivationKind kind, int power, std::optional<int> multiplicity,
                               std::string name)
    : kind_(kind), power_(power), multiplicity_(multiplicity), name_(std::move(name)) {}

ActivationSpec ActivationSpec::tanh() { return {ActivationKind::tanh, 1, 1, "tanh"}; }
ActivationSpec ActivationSpec::xtanh() { return {ActivationKind::xtanh, 2, 2, "xtanh"}; }
ActivationSpec ActivationSpec::x2tanh() { return {ActivationKind::x2tanh, 3, 3, "x2tanh"}; }
ActivationSpec ActivationSpec::sigmoid() { return {ActivationKind::sigmoid, 0, 1, "sigmoid"}; }
ActivationSpec ActivationSpec::softplus() { return {ActivationKind::softplus, 0, 1, "softplus"}; }
ActivationSpec ActivationSpec::relu() { return {ActivationKind::relu, 0, std::nullopt, "relu"}; }

ActivationSpec ActivationSpec::ptanh(int p) {
    if (p < 1) {
        throw ConfigError("ptanh power must be a positive integer, got " + std::to_string(p));
    }
    return {ActivationKind::ptanh, p, p, "ptanh:" + std::to_string(p)};
}

ActivationSpec ActivationSpec::parse(std::string_view name) {
    if (name == "tanh") return tanh();
    if (name == "xtanh") return xtanh();
    if (name == "x2tanh") return x2tanh();
    if (name == "sigmoid") return sigmoid();
    if (name == "softplus") return softplus();
    if (name == "relu") return relu();
    constexpr std::string_view prefix = "ptanh:";
    if (name.substr(0, prefix.size()) == prefix) {
        const auto digits = name.substr(prefix.size());
        int p = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty() && p >= 1) {
            return ptanh(p);
        }
    }
    throw ConfigError("unknown activation '" + std::string(name) + "'");
}

ActivationSpec ActivationSpec::mislabeled(int declared) const {
    ActivationSpec copy = *this;
    copy.multiplicity_ = declared;
    return copy;
}

int ActivationSpec::multiplicity() const {
    if (!multiplicity_) {
        throw UnsupportedError("activation '" + name_ + "' has no multiplicity");
    }
    return *multiplicity_;
}

double ActivationSpec::leading_derivative_coefficient() const {
    switch (kind_) {
        case ActivationKind::tanh:
        case ActivationKind::xtanh:
        case ActivationKind::x2tanh:
        case ActivationKind::ptanh:
            // x^{p-1} tanh x = x^p + O(x^{p+2}), so sigma'(z) = p z^{p-1} + ...
            return static_cast<double>(power_);
        case ActivationKind::sigmoid:
            return 0.25;
        case ActivationKind::softplus:
            return 0.5;
        case ActivationKind::relu:
            break;
    }
    throw UnsupportedError("relu has no leading-order expansion at 0");
}

double eval(const ActivationSpec& act, double z) {
    require_finite(z);
    switch (act.kind()) {
        case ActivationKind::tanh:
            return std::tanh(z);
        case ActivationKind::xtanh:
            return z * std::tanh(z);
        case ActivationKind::x2tanh:
            return z * z * std::tanh(z);
        case ActivationKind::ptanh:
            return ipow(z, act.tanh_power() - 1) * std::tanh(z);
        case ActivationKind::sigmoid:
            return stable_sigmoid(z);
        case ActivationKind::softplus:
            return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
        case ActivationKind::relu:
            return z > 0.0 ? z : 0.0;
    }
    return 0.0;
}

double deriv(const ActivationSpec& act, double z) {
    require_finite(z);
    switch (act.kind()) {
        case ActivationKind::tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case ActivationKind::xtanh: {
            const double t = std::tanh(z);
            return t + z * (1.0 - t * t);
        }
        case ActivationKind::x2tanh: {
            const double t = std::tanh(z);
            return 2.0 * z * t + z * z * (1.0 - t * t);
        }
        case ActivationKind::ptanh: {
            const int p = act.tanh_power();
            const double t = std::tanh(z);
            const double sech2 = 1.0 - t * t;
            if (p == 1) return sech2;
            return (p - 1) * ipow(z, p - 2) * t + ipow(z, p - 1) * sech2;
        }
        case ActivationKind::sigmoid: {
            const double s = stable_sigmoid(z);
            return s * (1.0 - s);
        }
        case ActivationKind::softplus:
            return stable_sigmoid(z);
        case ActivationKind::relu:
            return z > 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double deriv_leading_order(const ActivationSpec& act, double z) {
    require_finite(z);
    const double c = act.leading_derivative_coefficient();
    int p = 1;
    if (act.tanh_power() > 0) p = act.tanh_power();
    return c * ipow(z, p - 1);
}

double derivative_at_zero(const ActivationSpec& act, int k, double h) {
    if (!act.smooth()) {
        throw UnsupportedError("derivative at 0 is undefined for '" + act.name() + "'");
    }
    if (k < 1 || k > 8) {
        throw PreconditionError("derivative order must lie in [1, 8]");
    }
    if (!(h > 0.0 && h <= 0.5)) {
        throw PreconditionError("finite-difference step must lie in (0, 0.5]");
    }
    // k-th central difference: sum_j (-1)^j C(k,j) f((k/2 - j) h) / h^k.
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double node = (0.5 * k - j) * h;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binomial(k, j) * eval(act, node);
    }
    return acc / std::pow(h, k);
}

bool verify_multiplicity(const ActivationSpec& act, const MultiplicityTolerance& tol) {
    const int p = act.multiplicity();
    if (p > 8) {
        throw UnsupportedError("multiplicity above 8 cannot be verified by finite differences");
    }
    for (int k = 1; k < p; ++k) {
        if (std::abs(derivative_at_zero(act, k, tol.step)) >= tol.zero) return false;
    }
    return std::abs(derivative_at_zero(act, p, tol.step)) > tol.nonzero;
}

}  // namespace condense
