#include "condense/theory.hpp"

#include "condense/errors.hpp"
#include "condense/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace condense {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void require_planar(const ResidualSet& res) {
    if (res.layer_inputs.cols() != 2) {
        throw UnsupportedError("layer " + std::to_string(res.layer) +
                               " does not have a 2-d augmented input");
    }
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double tangential(const ResidualSet& res, const ActivationSpec& act, double radius, double phi) {
    const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
    const VectorXd v = direction_field(res, act, radius * u);
    return -std::sin(phi) * v[0] + std::cos(phi) * v[1];
}

}  // namespace

VectorXd ResidualSet::scalar_residuals() const {
    if (e.cols() != 1) {
        throw UnsupportedError("direction analysis needs scalar residuals, got " +
                               std::to_string(e.cols()) + " output components");
    }
    return e.col(0);
}

ResidualSet residuals(const NetworkConfig& config, const NetworkParams& params,
                      const Batch& batch, std::size_t layer) {
    batch.validate(config);
    ResidualSet r;
    r.layer = layer;
    r.layer_inputs = layer_inputs(config, params, batch.inputs, layer);
    r.e = predict(config, params, batch.inputs) - batch.targets;
    return r;
}

VectorXd direction_field(const ResidualSet& res, const ActivationSpec& act, const VectorXd& omega) {
    const VectorXd e = res.scalar_residuals();
    if (omega.size() != res.layer_inputs.cols()) {
        throw ConfigError("omega has length " + std::to_string(omega.size()) + ", expected " +
                          std::to_string(res.layer_inputs.cols()));
    }
    if (!omega.allFinite()) throw DomainError("omega is not finite");
    VectorXd acc = VectorXd::Zero(omega.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const auto x = res.layer_inputs.row(i);
        acc += (e[i] * deriv(act, x.dot(omega))) * x.transpose();
    }
    return -acc / static_cast<double>(e.size());
}

FieldGrid field_grid(const ResidualSet& res, const ActivationSpec& act, double lo, double hi,
                     std::size_t resolution) {
    require_planar(res);
    if (resolution < 2) throw PreconditionError("grid resolution must be at least 2");
    if (!(lo < hi)) throw PreconditionError("grid range must satisfy lo < hi");
    FieldGrid g;
    g.lo = lo;
    g.hi = hi;
    g.resolution = resolution;
    const double step = (hi - lo) / static_cast<double>(resolution - 1);
    for (std::size_t a = 0; a < resolution; ++a) {
        const double w = (a + 1 == resolution) ? hi : lo + step * static_cast<double>(a);
        for (std::size_t b = 0; b < resolution; ++b) {
            const double bias = (b + 1 == resolution) ? hi : lo + step * static_cast<double>(b);
            const VectorXd v = direction_field(res, act, Eigen::Vector2d(w, bias));
            g.points.push_back({w, bias, v[0], v[1], w == 0.0 && bias == 0.0});
        }
    }
    return g;
}

VectorXd operator_P(const VectorXd& w, const VectorXd& w_dot) {
    if (w.size() != w_dot.size()) throw ConfigError("weight and velocity lengths differ");
    const double r = w.norm();
    if (r == 0.0) throw SingularityError("tangential projection undefined at w = 0");
    const VectorXd u = w / r;
    return w_dot - u * w_dot.dot(u);
}

VectorXd neuron_velocity(const NetworkConfig& config, const NetworkParams& params,
                         const ResidualSet& res, std::size_t layer, std::size_t neuron) {
    const MatrixXd v = layer_velocity(config, params, layer, res.layer_inputs, res.e,
                                      DerivativeMode::exact);
    if (neuron >= static_cast<std::size_t>(v.rows())) throw ConfigError("neuron out of range");
    return v.row(static_cast<Eigen::Index>(neuron)).transpose();
}

VectorXd operator_Q(const NetworkConfig& config, const NetworkParams& params,
                    const ResidualSet& res, const ActivationSpec& act, std::size_t layer,
                    std::size_t neuron) {
    config.fan_in(layer);
    if (!(config.activations[layer - 1] == act)) {
        throw ConfigError("activation '" + act.name() + "' is not the activation of layer " +
                          std::to_string(layer));
    }
    const MatrixXd v = layer_velocity(config, params, layer, res.layer_inputs, res.e,
                                      DerivativeMode::leading_order);
    const VectorXd w = neuron_weight(params, layer, neuron);
    return operator_P(w, v.row(static_cast<Eigen::Index>(neuron)).transpose());
}

VectorXd canonical_direction(const VectorXd& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] != 0.0) return u[i] < 0.0 ? VectorXd(-u) : u;
    }
    return u;
}

double line_angle(const Eigen::Vector2d& u) {
    double a = std::atan2(u[1], u[0]);
    if (a < 0.0) a += std::numbers::pi;
    if (a >= std::numbers::pi) a -= std::numbers::pi;
    return a;
}

double line_angle_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), std::numbers::pi);
    return std::min(d, std::numbers::pi - d);
}

DirectionPrediction predict_case1(const ResidualSet& res) {
    const VectorXd e = res.scalar_residuals();
    const VectorXd s = res.layer_inputs.transpose() * e;
    double scale = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        scale += std::abs(e[i]) * res.layer_inputs.row(i).norm();
    }
    if (s.norm() == 0.0 || s.norm() <= 1e-14 * scale) {
        throw DegenerateError("sum of e_i x_i vanishes; no predicted direction");
    }
    DirectionPrediction p;
    p.method = PredictionMethod::case1_p1;
    p.p_used = 1;
    p.unit_directions.push_back(canonical_direction(s / s.norm()));
    return p;
}

std::vector<double> case2_polynomial(const ResidualSet& res, int p) {
    require_planar(res);
    if (p < 1) throw PreconditionError("multiplicity must be positive");
    const VectorXd e = res.scalar_residuals();
    // moment(a, b) = sum_i e_i x1^a x2^b with a + b = p.
    auto moment = [&](int a, int b) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            s += e[i] * std::pow(res.layer_inputs(i, 0), a) * std::pow(res.layer_inputs(i, 1), b);
        }
        return s;
    };
    std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
    for (int k = 0; k < p; ++k) {
        const double binom = binomial(p - 1, k);
        c[static_cast<std::size_t>(k)] -= binom * moment(k + 1, p - 1 - k);
        c[static_cast<std::size_t>(k) + 1] += binom * moment(k, p - k);
    }
    return c;
}

DirectionPrediction predict_case2(const ResidualSet& res, int p) {
    const std::vector<double> c = case2_polynomial(res, p);
    const std::size_t degree = trimmed_degree(c);
    DirectionPrediction out;
    out.method = PredictionMethod::case2_poly;
    out.p_used = p;
    for (double root : polynomial_real_roots(c)) {
        const Eigen::Vector2d u(root, 1.0);
        out.unit_directions.push_back(canonical_direction(u / u.norm()));
    }
    if (degree < static_cast<std::size_t>(p)) {
        out.unit_directions.push_back(Eigen::Vector2d(1.0, 0.0));
    }
    return out;
}

DirectionPrediction angular_sweep(const ResidualSet& res, const ActivationSpec& act,
                                  std::size_t n_angles, double radius) {
    require_planar(res);
    if (n_angles < 360) throw PreconditionError("angular sweep needs at least 360 angles");
    if (!(radius > 0.0)) throw PreconditionError("sweep radius must be positive");

    DirectionPrediction out;
    out.method = PredictionMethod::angular_sweep;
    out.p_used = act.declared_multiplicity();

    const double two_pi = 2.0 * std::numbers::pi;
    const double step = two_pi / static_cast<double>(n_angles);
    std::vector<double> t(n_angles);
    bool all_zero = true;
    for (std::size_t k = 0; k < n_angles; ++k) {
        t[k] = tangential(res, act, radius, step * static_cast<double>(k));
        if (t[k] != 0.0) all_zero = false;
    }
    if (all_zero) {
        out.degenerate = true;
        return out;
    }

    auto slope_sign = [&](double phi, int bracket_sign) {
        const double h = std::min(step / 8.0, 1e-5);
        const double d = tangential(res, act, radius, phi + h) - tangential(res, act, radius, phi - h);
        if (d < 0.0) return -1;
        if (d > 0.0) return 1;
        return bracket_sign;
    };

    std::vector<double> roots;
    std::vector<int> slopes;
    for (std::size_t k = 0; k < n_angles; ++k) {
        const double phi = step * static_cast<double>(k);
        const double tk = t[k];
        const double tn = t[(k + 1) % n_angles];
        const double tp = t[(k + n_angles - 1) % n_angles];
        if (tk == 0.0) {
            if (tp * tn < 0.0) {
                roots.push_back(phi);
                slopes.push_back(slope_sign(phi, tn > 0.0 ? 1 : -1));
            }
            continue;
        }
        if (tk * tn >= 0.0) continue;
        double lo = phi;
        double hi = phi + step;
        double flo = tk;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = tangential(res, act, radius, mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        roots.push_back(root);
        slopes.push_back(slope_sign(root, tn > tk ? 1 : -1));
    }

    // Orientation phi attracts neurons with output-coefficient sign s when
    // s * dt/dphi < 0.
    for (std::size_t i = 0; i < roots.size(); ++i) {
        StationaryOrientation o;
        o.angle = std::fmod(roots[i], two_pi);
        o.direction = Eigen::Vector2d(std::cos(o.angle), std::sin(o.angle));
        o.attracting_sign = -slopes[i];
        out.orientations.push_back(o);
    }

    std::vector<double> line_angles;
    for (const auto& o : out.orientations) {
        if (o.attracting_sign == 0) continue;
        const double a = line_angle(o.direction);
        const bool seen = std::any_of(line_angles.begin(), line_angles.end(), [&](double b) {
            return line_angle_distance(a, b) < 1e-6;
        });
        if (!seen) line_angles.push_back(a);
    }
    std::sort(line_angles.begin(), line_angles.end());
    for (double a : line_angles) {
        out.unit_directions.push_back(
            canonical_direction(Eigen::Vector2d(std::cos(a), std::sin(a))));
    }
    return out;
}

std::vector<double> alignment(const std::vector<VectorXd>& weights,
                              const DirectionPrediction& prediction) {
    std::vector<double> out;
    out.reserve(weights.size());
    for (const auto& w : weights) {
        const double norm = w.norm();
        double best = 0.0;
        if (norm > 0.0) {
            for (const auto& v : prediction.unit_directions) {
                if (v.size() != w.size()) throw ConfigError("prediction and weight lengths differ");
                best = std::max(best, std::abs(w.dot(v)) / norm);
            }
        }
        out.push_back(best);
    }
    return out;
}

std::string to_string(PredictionMethod method) {
    switch (method) {
        case PredictionMethod::case1_p1:
            return "case1_p1";
        case PredictionMethod::case2_poly:
            return "case2_poly";
        case PredictionMethod::angular_sweep:
            return "angular_sweep";
    }
    return "unknown";
}

}  // namespace condense
