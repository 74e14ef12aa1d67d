#pragma once

#include <functional>

namespace mfgn {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss–Kronrod quadrature of f over [a, b].
///
/// The interval with the largest error estimate is bisected until
/// error <= max(abs_tol, rel_tol * |value|). Endpoint singularities that are
/// integrable are tolerated since nodes never touch the endpoints.
/// Throws ConvergenceError when max_intervals is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace mfgn
