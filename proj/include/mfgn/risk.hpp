#pragma once

#include <iosfwd>
#include <vector>

namespace mfgn {

// Values are signed P&L amounts: losses are negative, so a deeper tail is a
// smaller number. Reports flip the sign to show losses as positive magnitudes.

struct RiskReport {
    double alpha = 0.05;
    double var_value = 0.0;
    double es_value = 0.0;
    double eta = 0.0;
    double prev_value = 1.0;

    void validate() const;
};

/// (μ + σ Φ⁻¹(α)) · prev.
double var_gaussian(double mu, double sigma, double alpha, double prev);

/// (η + 1) · var_u.
double portfolio_var(double eta, double var_u);

/// (μ - σ φ(Φ⁻¹(α)) / α) · multiplier · prev.
double es_gaussian(double mu, double sigma, double alpha, double multiplier, double prev);

/// (1/α) ∫₀^α (μ + σ Φ⁻¹(p)) dp by adaptive quadrature after p = α u².
double es_integral_oracle(double mu, double sigma, double alpha);

/// Portfolio VaR and ES for a one-period return forecast N(mean, variance),
/// hedge ratio η ≥ -1 and previous price prev.
RiskReport risk_report(double mean, double variance, double alpha, double eta, double prev);

/// N(d₁) for a European call; a convenience source of η.
double black_scholes_call_delta(double spot, double strike, double rate, double vol, double tau);

/// CSV with header `alpha,eta,var,es`, losses as positive numbers.
void write_risk_csv(std::ostream& out, const std::vector<RiskReport>& reports);

}  // namespace mfgn
