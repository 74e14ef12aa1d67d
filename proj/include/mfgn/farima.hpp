#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mfgn/acvf.hpp"

namespace mfgn {

/// FARIMA(p, d, q): Φ(L)(1-L)^d (X - μ) = Θ(L) ε with
/// Φ(L) = 1 - φ₁L - ... - φ_pL^p and Θ(L) = 1 - θ₁L - ... - θ_qL^q.
///
/// Note the minus sign on the MA side; software using Θ(L) = 1 + θ₁L + ...
/// needs θ negated.
struct FarimaSpec {
    double d = 0.0;
    std::vector<double> ar;
    std::vector<double> ma;
    double sigma2_eps = 1.0;
    double mu = 0.0;

    int p() const { return static_cast<int>(ar.size()); }
    int q() const { return static_cast<int>(ma.size()); }

    /// d in (-1/2, 1/2), sigma2_eps > 0, every inverse AR root strictly inside the unit disc.
    void validate() const;
};

/// Pieces of the closed-form autocovariance that depend only on the FarimaSpec.
struct SowellIntermediates {
    Eigen::VectorXcd roots;  // inverse AR roots ρ_j
    Eigen::VectorXd psi;     // ψ_k for k = -q..q stored at k + q
    Eigen::VectorXcd zeta;   // ζ_j

    double psi_at(int k) const { return psi(k + (psi.size() - 1) / 2); }
};

/// Inverse roots of Φ, i.e. zeros of z^p Φ(1/z), from companion-matrix
/// eigenvalues, sorted by (real, imag). Stationarity ⟺ all |ρ| < 1.
Eigen::VectorXcd ar_roots(const std::vector<double>& ar);

/// First n_terms coefficients of Φ⁻¹(L)(1-L)^{-d}Θ(L); coefficient 0 is 1.
Eigen::VectorXd ma_coefficients(const FarimaSpec& spec, long n_terms);

struct MaTruncatedAcvf {
    AcvfSequence acvf;            // truncated sum plus tail estimate
    Eigen::VectorXd truncated;    // σ² Σ_{j<n_terms-k} ψ_j ψ_{j+k}
    Eigen::VectorXd tail;         // estimate of the omitted hyperbolic tail
};

/// MA-representation autocovariance from n_terms ψ-weights.
///
/// For d != 0 the omitted tail Σ_{j>=N} ψ_j ψ_{j+k} is estimated from the
/// asymptote ψ_j ~ Θ(1)/(Φ(1)Γ(d)) j^{d-1} with an Euler–Maclaurin sum; the
/// raw truncated sums and the tail estimates are reported alongside.
MaTruncatedAcvf acvf_ma_truncated(const FarimaSpec& spec, long max_lag, long n_terms = 1L << 20);

/// Spectral density f(ω) = σ²/(2π) |Θ(e^{-iω})|² / |Φ(e^{-iω})|² |1 - e^{-iω}|^{-2d}.
double spectral_density(const FarimaSpec& spec, double omega);

/// γ_k = 2∫₀^π f(ω) cos(kω) dω by adaptive quadrature, one integral per lag.
/// The lag-set overload returns values indexed by lag up to the largest one
/// requested; lags not asked for are NaN.
double acvf_spectral_at(const FarimaSpec& spec, long k);
AcvfSequence acvf_spectral(const FarimaSpec& spec, const std::vector<long>& lags);
AcvfSequence acvf_spectral(const FarimaSpec& spec, long max_lag);

/// Γ(1-2d)/Γ(1-d)² · (d)_h/(1-d)_h · [ρ^{2p} F(d+h,1;1-d+h;ρ) + F(d-h,1;1-d-h;ρ) - 1]
std::complex<double> sowell_C(double d, int h, std::complex<double> rho, int p);

/// Throws DomainError when two AR roots are closer than 1e-8.
SowellIntermediates sowell_intermediates(const FarimaSpec& spec);

/// Closed-form autocovariance. p >= 1 with d != 0 uses the hypergeometric
/// sum; d == 0 falls back to the exact ARMA recursion and p == 0 to the
/// fractional-noise autocovariance filtered by Θ.
AcvfSequence acvf_sowell(const FarimaSpec& spec, long max_lag);

/// MA order N = p + d + 1 + (q - p - d - 1)/m of the m-period aggregate.
double aggregated_order(int p, double d, int q, long m_agg);

}  // namespace mfgn
