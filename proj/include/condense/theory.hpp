#pragma once

#include "condense/activations.hpp"
#include "condense/network.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace condense {

/// Residuals e_i = f(x_i) - y_i together with the augmented inputs
/// x_i^[k-1] of the analyzed hidden layer k.
struct ResidualSet {
    std::size_t layer = 1;
    Eigen::MatrixXd e;             // n x d_out
    Eigen::MatrixXd layer_inputs;  // n x (m_{k-1} + 1)

    std::size_t size() const noexcept { return static_cast<std::size_t>(e.rows()); }
    /// e as a vector; throws UnsupportedError for multi-output residuals.
    Eigen::VectorXd scalar_residuals() const;
};

ResidualSet residuals(const NetworkConfig& config, const NetworkParams& params,
                      const Batch& batch, std::size_t layer);

/// omega_dot = -(1/n) sum_i e_i x_i sigma'(omega . x_i).
Eigen::VectorXd direction_field(const ResidualSet& res, const ActivationSpec& act,
                                const Eigen::VectorXd& omega);

struct FieldPoint {
    double w = 0.0;
    double b = 0.0;
    double dw = 0.0;
    double db = 0.0;
    bool origin = false;
};

/// direction_field sampled on a resolution x resolution lattice over
/// [lo, hi]^2; w is the outer index, b the inner one.
struct FieldGrid {
    double lo = -1.0;
    double hi = 1.0;
    std::size_t resolution = 2;
    std::vector<FieldPoint> points;
};

FieldGrid field_grid(const ResidualSet& res, const ActivationSpec& act, double lo, double hi,
                     std::size_t resolution);

/// Tangential part of the velocity: w_dot - u (w_dot . u), u = w / |w|.
Eigen::VectorXd operator_P(const Eigen::VectorXd& w, const Eigen::VectorXd& w_dot);

/// True velocity of neuron j in hidden layer k (row j of -dR/dW^[k]).
Eigen::VectorXd neuron_velocity(const NetworkConfig& config, const NetworkParams& params,
                                const ResidualSet& res, std::size_t layer, std::size_t neuron);

/// Leading-order counterpart of operator_P: the velocity is recomputed with
/// every sigma' at layers >= k replaced by c z^{p-1}, then projected.
/// `act` must be the activation of layer k.
Eigen::VectorXd operator_Q(const NetworkConfig& config, const NetworkParams& params,
                           const ResidualSet& res, const ActivationSpec& act, std::size_t layer,
                           std::size_t neuron);

enum class PredictionMethod { case1_p1, case2_poly, angular_sweep };

/// A stationary orientation found by the angular sweep. attracting_sign is
/// +1 when the orientation attracts neurons whose output coefficient is
/// positive, -1 when it attracts those with a negative one, 0 if neither.
struct StationaryOrientation {
    double angle = 0.0;
    Eigen::Vector2d direction = Eigen::Vector2d::Zero();
    int attracting_sign = 0;
};

struct DirectionPrediction {
    PredictionMethod method = PredictionMethod::case1_p1;
    std::optional<int> p_used;
    /// One unit vector per line, first nonzero coordinate positive.
    std::vector<Eigen::VectorXd> unit_directions;
    bool degenerate = false;
    std::vector<StationaryOrientation> orientations;  // angular_sweep only

    std::size_t n_lines() const noexcept { return unit_directions.size(); }
};

/// Flips u so that its first nonzero coordinate is positive.
Eigen::VectorXd canonical_direction(const Eigen::VectorXd& u);

/// Angle of a 2-d line in [0, pi).
double line_angle(const Eigen::Vector2d& u);

/// Distance between two line angles modulo pi.
double line_angle_distance(double a, double b);

/// The single stable line +-normalize(sum_i e_i x_i) for multiplicity one.
/// Throws DegenerateError when the sum vanishes.
DirectionPrediction predict_case1(const ResidualSet& res);

/// Coefficients (ascending in u_hat = u1/u2) of
/// u_hat sum_i (u_hat x1 + x2)^{p-1} e_i x2 - sum_i (u_hat x1 + x2)^{p-1} e_i x1,
/// built from the moments S_ab = sum_i e_i x1^a x2^b.
std::vector<double> case2_polynomial(const ResidualSet& res, int p);

/// Stationary lines for a layer with 2-d augmented input and multiplicity p.
/// Real roots u_hat map to (u_hat, 1); the vertical line (1, 0) is appended
/// when the degree-p coefficient vanishes. Throws DegenerateError when the
/// polynomial is identically zero.
DirectionPrediction predict_case2(const ResidualSet& res, int p);

/// Brute-force oracle: sign changes of the tangential field
/// t(phi) = omega_dot(r (cos phi, sin phi)) . (-sin phi, cos phi),
/// refined by bisection and classified by the sign of dt/dphi.
DirectionPrediction angular_sweep(const ResidualSet& res, const ActivationSpec& act,
                                  std::size_t n_angles, double radius);

/// Per-weight max |D(u_j, v)| over the predicted directions v.
std::vector<double> alignment(const std::vector<Eigen::VectorXd>& weights,
                              const DirectionPrediction& prediction);

std::string to_string(PredictionMethod method);

}  // namespace condense
