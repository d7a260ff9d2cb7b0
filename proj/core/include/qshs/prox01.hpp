#pragma once

// The 0-1 loss, its proximal operator, and the working-band test.
//
// The scalar prox problem  min_u  C*[u > 0] + (1/(2*gamma))*(u - v)^2
// has a closed form: zero out v when it lies in the half-open band
// (0, sqrt(2*gamma*C)], keep it otherwise. The band boundary maps to 0
// (both choices attain the same objective; we fix one for determinism)
// and the comparison is exact floating point, no epsilon.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qshs {

struct ProxParams {
    double gamma = 1.0;  // prox step; the solver passes 1/sigma
    double C = 1.0;      // loss penalty

    ProxParams(double gamma_, double C_) : gamma(gamma_), C(C_) {
        if (!(gamma > 0.0) || !(C > 0.0))
            throw std::invalid_argument("ProxParams: gamma and C must be positive");
    }

    double threshold() const { return std::sqrt(2.0 * gamma * C); }
};

// 1 when t > 0, else 0. Call sites pass t = 1 - y*f(x).
inline int zero_one_loss(double t) { return t > 0.0 ? 1 : 0; }

// true iff prox zeroes this component, i.e. v in (0, threshold]
inline bool in_working_band(double v, const ProxParams& p) {
    return v > 0.0 && v <= p.threshold();
}

inline double prox_scalar(double v, const ProxParams& p) {
    return in_working_band(v, p) ? 0.0 : v;
}

// componentwise prox; idempotent
Eigen::VectorXd prox(const Eigen::VectorXd& v, const ProxParams& p);

}  // namespace qshs
