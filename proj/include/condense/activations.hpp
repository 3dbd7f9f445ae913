#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace condense {

enum class ActivationKind { tanh, xtanh, x2tanh, sigmoid, softplus, relu, ptanh };

/// An activation function together with its multiplicity metadata.
///
/// Multiplicity p is the smallest order whose derivative at the origin is
/// nonzero. The tanh family x^{p-1} tanh(x) has multiplicity p; sigmoid and
/// softplus have multiplicity 1; relu has a kink at 0 and carries none.
class ActivationSpec {
public:
    static ActivationSpec tanh();
    static ActivationSpec xtanh();
    static ActivationSpec x2tanh();
    static ActivationSpec sigmoid();
    static ActivationSpec softplus();
    static ActivationSpec relu();
    /// x^{p-1} tanh(x); p >= 1.
    static ActivationSpec ptanh(int p);

    /// Parses the config-file name: "tanh", "xtanh", "x2tanh", "sigmoid",
    /// "softplus", "relu" or "ptanh:<p>". Throws ConfigError otherwise.
    static ActivationSpec parse(std::string_view name);

    /// Same function with a different declared multiplicity. Only useful for
    /// negative controls in multiplicity verification.
    ActivationSpec mislabeled(int declared) const;

    ActivationKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    std::optional<int> declared_multiplicity() const noexcept { return multiplicity_; }
    bool smooth() const noexcept { return kind_ != ActivationKind::relu; }

    /// Declared multiplicity, or UnsupportedError for relu.
    int multiplicity() const;

    /// sigma^{(p)}(0) / (p-1)!, the coefficient of the leading monomial of
    /// sigma'(z) = c z^{p-1} + o(z^{p-1}). Uses the true function, not the
    /// declared label.
    double leading_derivative_coefficient() const;

    /// Exponent of the tanh family (x^{power-1} tanh x); 0 for non-tanh kinds.
    int tanh_power() const noexcept { return power_; }

    friend bool operator==(const ActivationSpec&, const ActivationSpec&) = default;

private:
    ActivationSpec(ActivationKind kind, int power, std::optional<int> multiplicity,
                   std::string name);

    ActivationKind kind_;
    int power_;
    std::optional<int> multiplicity_;
    std::string name_;
};

/// sigma(z). Throws DomainError for non-finite z.
double eval(const ActivationSpec& act, double z);

/// sigma'(z), coded analytically. relu'(0) is taken as 0.
double deriv(const ActivationSpec& act, double z);

/// Leading monomial of sigma' at the origin: c * z^{p-1}.
double deriv_leading_order(const ActivationSpec& act, double z);

/// Central finite-difference estimate of sigma^{(k)}(0) on the (k+1)-point
/// symmetric stencil with nodes (k/2 - j) h. Accepts 1 <= k <= 8 and
/// h in (0, 0.5]. relu throws UnsupportedError.
double derivative_at_zero(const ActivationSpec& act, int k, double h);

struct MultiplicityTolerance {
    double zero = 1e-4;
    double nonzero = 1e-2;
    double step = 1e-3;
};

/// True iff the finite-difference derivatives at 0 vanish below the declared
/// multiplicity and the declared-order derivative does not.
bool verify_multiplicity(const ActivationSpec& act, const MultiplicityTolerance& tol = {});

}  // namespace condense
