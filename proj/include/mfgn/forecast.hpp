#pragma once

#include <span>

#include <Eigen/Dense>

#include "mfgn/acvf.hpp"
#include "mfgn/levinson.hpp"

namespace mfgn {

struct ForecastResult {
    double mean = 0.0;
    double variance = 0.0;
    long horizon = 1;
    long window = 1;
};

/// One-step predictor coefficients and innovation variances of order n.
DurbinLevinson<double> durbin_levinson_coeffs(const AcvfSequence& acvf, long n);

/// k-step best linear predictor from a fixed window of n observations.
///
/// The weights a = Γ_n⁻¹ g_k with g_k = (γ_{n+k-1}, ..., γ_k) and the variance
/// γ₀ - g_kᵀ a are computed once by Levinson's algorithm; each call then costs
/// one dot product. Window data are ordered oldest first, newest last.
class Predictor {
public:
    Predictor(const AcvfSequence& acvf, long window, long horizon);

    ForecastResult operator()(std::span<const double> data, double mu) const;

    const Eigen::VectorXd& weights() const { return weights_; }
    double variance() const { return variance_; }
    long window() const { return window_; }
    long horizon() const { return horizon_; }

private:
    Eigen::VectorXd weights_;
    double variance_ = 0.0;
    long window_;
    long horizon_;
};

/// mean = μ + g_kᵀ Γ_n⁻¹ (x - μ), variance = γ₀ - g_kᵀ Γ_n⁻¹ g_k with n = data.size().
ForecastResult predict(const AcvfSequence& acvf, std::span<const double> data, double mu, long k);

}  // namespace mfgn
