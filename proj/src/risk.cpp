#include "mfgn/risk.hpp"

#include <cmath>
#include <ostream>

#include "mfgn/acvf.hpp"
#include "mfgn/errors.hpp"
#include "mfgn/quadrature.hpp"
#include "mfgn/specfun.hpp"

namespace mfgn {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("risk: alpha must lie in (0, 1)");
}

void check_sigma_prev(double sigma, double prev) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("risk: sigma must be positive");
    if (!(prev > 0.0) || !std::isfinite(prev)) throw DomainError("risk: prev must be positive");
}

}  // namespace

void RiskReport::validate() const {
    check_alpha(alpha);
    if (!(prev_value > 0.0)) throw DomainError("risk: prev must be positive");
}

double var_gaussian(double mu, double sigma, double alpha, double prev) {
    check_alpha(alpha);
    check_sigma_prev(sigma, prev);
    return (mu + sigma * std_normal_quantile(alpha)) * prev;
}

double portfolio_var(double eta, double var_u) { return (eta + 1.0) * var_u; }

double es_gaussian(double mu, double sigma, double alpha, double multiplier, double prev) {
    check_alpha(alpha);
    check_sigma_prev(sigma, prev);
    const double tail = std_normal_pdf(std_normal_quantile(alpha)) / alpha;
    return (mu - sigma * tail) * multiplier * prev;
}

double es_integral_oracle(double mu, double sigma, double alpha) {
    check_alpha(alpha);
    check_sigma_prev(sigma, 1.0);
    auto integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        return 2.0 * u * (mu + sigma * std_normal_quantile(alpha * u * u));
    };
    return integrate(integrand, 0.0, 1.0, {1e-13, 1e-12, 4000}).value;
}

RiskReport risk_report(double mean, double variance, double alpha, double eta, double prev) {
    if (!(variance > 0.0)) throw DomainError("risk: forecast variance must be positive");
    if (eta < -1.0) throw DomainError("risk: eta must be at least -1");
    const double sigma = std::sqrt(variance);
    RiskReport r;
    r.alpha = alpha;
    r.eta = eta;
    r.prev_value = prev;
    r.var_value = portfolio_var(eta, var_gaussian(mean, sigma, alpha, prev));
    r.es_value = es_gaussian(mean, sigma, alpha, eta + 1.0, prev);
    return r;
}

double black_scholes_call_delta(double spot, double strike, double rate, double vol, double tau) {
    if (!(spot > 0.0 && strike > 0.0 && vol > 0.0 && tau > 0.0))
        throw DomainError("black_scholes_call_delta: spot, strike, vol and tau must be positive");
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * vol * vol) * tau) / (vol * std::sqrt(tau));
    return std_normal_cdf(d1);
}

void write_risk_csv(std::ostream& out, const std::vector<RiskReport>& reports) {
    // 0.0 - x rather than -x so a zero loss prints as 0, not -0
    out << "alpha,eta,var,es\n";
    for (const auto& r : reports)
        out << format_real(r.alpha) << ',' << format_real(r.eta) << ',' << format_real(0.0 - r.var_value)
            << ',' << format_real(0.0 - r.es_value) << '\n';
}

}  // namespace mfgn
