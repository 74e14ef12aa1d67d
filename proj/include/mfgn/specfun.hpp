#pragma once

#include <complex>

namespace mfgn {

/// Accuracy controls shared by the iterative special functions.
struct Tolerances {
    double rel_tol = 1e-12;
    int max_iter = 500;

    /// Throws DomainError unless rel_tol > 0 and max_iter >= 1.
    void validate() const;
};

/// log|Γ(x)| together with the sign of Γ(x).
struct LogGamma {
    double value;
    int sign;
};

/// log|Γ(x)|; throws PoleError at x = 0, -1, -2, ...
LogGamma ln_gamma(double x);

/// Complete beta function B(a, b) for a, b > 0.
double beta(double a, double b);

/// Non-regularized lower incomplete beta B(x; a, b) = ∫₀ˣ t^{a-1}(1-t)^{b-1} dt.
///
/// Evaluated by Lentz's continued fraction, switching to the complement
/// B(a,b) - B(1-x; b, a) when x > (a+1)/(a+b+2). B(1; a, b) is exactly beta(a, b).
double inc_beta_lower(double x, double a, double b, const Tolerances& tol = {});

/// Natural log of inc_beta_lower, usable where the value itself underflows.
/// Requires 0 < x <= 1.
double log_inc_beta_lower(double x, double a, double b, const Tolerances& tol = {});

/// Gauss hypergeometric F(a, 1; c; rho) by direct power series, |rho| < 1.
std::complex<double> hyp2f1_unit(double a, double c, std::complex<double> rho,
                                 const Tolerances& tol = {});

/// (d)_h / (1-d)_h for any integer h, with (x)_h = Γ(x+h)/Γ(x).
double pochhammer_ratio(double d, int h);

double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// Inverse of std_normal_cdf on (0, 1).
double std_normal_quantile(double p);

}  // namespace mfgn
