#include "mfgn/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mfgn/errors.hpp"
#include "mfgn/quadrature.hpp"
#include "mfgn/specfun.hpp"

namespace mfgn {

namespace {

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Above this value of gamma*dt the second difference of Q is taken directly;
// below it the short-step representation avoids cancellation.
constexpr double kDirectDifferenceThreshold = 2.0;

const Tolerances kBetaTol{1e-15, 2000};
const QuadratureOptions kQuad{1e-12, 1e-300, 4000};

// fOU₂ quantities shared across lags. With a_u = H e^{u/H} the kernel
// integrals reduce to the incomplete beta B(e^{-u/H}; beta1, beta2) and its
// integrand f(w) = (1/H) e^{-w beta1/H} (1 - e^{-w/H})^{beta2-1}.
struct Fou2Kernel {
    double H, gamma, h;
    double beta1, beta2;
    double K;      // (2H-1) H^{2H}
    double B;      // beta(beta1, beta2)

    explicit Fou2Kernel(const Fou2Params& p)
        : H(p.hurst), gamma(p.gamma), h(p.dt),
          beta1((p.gamma - 1.0) * p.hurst + 1.0), beta2(2.0 * p.hurst - 1.0),
          K((2.0 * p.hurst - 1.0) * std::pow(p.hurst, 2.0 * p.hurst)),
          B(beta(beta1, beta2)) {}

    double log_g(double u) const {
        if (u == 0.0) return std::log(B);
        // e^{-u/H} underflows; B(x; a, b) -> x^a / a.
        if (u / H > 700.0) return -u * beta1 / H - std::log(beta1);
        return log_inc_beta_lower(std::exp(-u / H), beta1, beta2, kBetaTol);
    }

    double log_f(double w) const {
        return -std::log(H) - w * beta1 / H + (beta2 - 1.0) * std::log(-std::expm1(-w / H));
    }

    // ∫_lo^hi e^{γ(2u - tau)} g(u) du
    double q_integral(double lo, double hi, double tau) const {
        if (hi <= lo) return 0.0;
        auto integrand = [&](double u) { return std::exp(gamma * (2.0 * u - tau) + log_g(u)); };
        return integrate(integrand, lo, hi, kQuad).value;
    }

    double q(double tau) const { return K * (B / gamma * std::exp(-gamma * tau) + q_integral(0.0, tau, tau)); }

    // ∫_lo^hi f(w) E(w) dw where log_kernel(w) = log of the smooth factor of E
    // and expm1_arg(w) its expm1 argument. A piece starting at w = 0 meets the
    // w^{beta2-1} singularity of f and is mapped to s = (1 - e^{-w/H})^{beta2},
    // under which f(w) dw = (1/beta2) e^{-w(beta1-1)/H} ds.
    template <typename LogKernel, typename Expm1Arg>
    double piece(double lo, double hi, LogKernel log_kernel, Expm1Arg expm1_arg) const {
        if (lo == 0.0) {
            const double s_hi = std::pow(-std::expm1(-hi / H), beta2);
            auto integrand = [&](double s) {
                if (s <= 0.0) return 0.0;
                const double w = -H * std::log1p(-std::pow(s, 1.0 / beta2));
                return std::exp(-w * (beta1 - 1.0) / H + log_kernel(w)) * std::expm1(expm1_arg(w)) / beta2;
            };
            return integrate(integrand, 0.0, s_hi, kQuad).value;
        }
        auto integrand = [&](double w) { return std::exp(log_f(w) + log_kernel(w)) * std::expm1(expm1_arg(w)); };
        return integrate(integrand, lo, hi, kQuad).value;
    }

    // ∫ over the tent around tau = m h that carries the second difference of Q.
    double tent_integral(long m) const {
        const double tau = static_cast<double>(m) * h;
        const double two_gamma = 2.0 * gamma;
        auto right = piece(
            tau, tau + h,
            [&](double w) { return gamma * (2.0 * w - tau - h) - std::log(two_gamma); },
            [&](double w) { return two_gamma * (tau + h - w); });
        if (m == 0) return 2.0 * right;
        auto left = piece(
            tau - h, tau,
            [&](double) { return gamma * (tau - h) - std::log(two_gamma); },
            [&](double w) { return two_gamma * (w - tau + h); });
        return left + right;
    }

    bool use_direct_difference() const { return gamma * h > kDirectDifferenceThreshold; }

    // 2Q(m) - Q(m-1) - Q(m+1) given Q at the three lags.
    double increment(long m, double q_prev, double q_mid, double q_next) const {
        if (use_direct_difference()) return 2.0 * q_mid - q_prev - q_next;
        const double sh = std::sinh(0.5 * gamma * h);
        return -4.0 * sh * sh * q_mid + K * tent_integral(m);
    }
};

void check_lag(long k, const char* who) {
    if (k < 0) throw DomainError(std::string(who) + ": lag must be non-negative");
}

}  // namespace

void FgnParams::validate() const {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("FgnParams: hurst must lie in (0, 1)");
    if (!(sigma2 > 0.0)) throw DomainError("FgnParams: sigma2 must be positive");
}

void Fou2Params::validate() const {
    if (!(hurst > 0.5 + 1e-6 && hurst < 1.0 - 1e-9))
        throw DomainError("Fou2Params: hurst must lie in (1/2, 1)");
    if (!(gamma > 0.0)) throw DomainError("Fou2Params: gamma must be positive");
    if (!(dt > 0.0)) throw DomainError("Fou2Params: dt must be positive");
}

MixedParams MixedParams::make(double sigma2_bm, double hurst_fgn, double hurst_fou2, double gamma,
                              double horizon_T, long grid_n) {
    MixedParams p;
    p.sigma2_bm = sigma2_bm;
    p.horizon_T = horizon_T;
    p.grid_n = grid_n;
    const double step = horizon_T / static_cast<double>(grid_n);
    p.fgn = {hurst_fgn, std::pow(step, 2.0 * hurst_fgn)};
    p.fou2 = {hurst_fou2, gamma, step};
    p.validate();
    return p;
}

void MixedParams::validate() const {
    if (!(sigma2_bm >= 0.0)) throw DomainError("MixedParams: sigma2_bm must be non-negative");
    if (!(horizon_T > 0.0)) throw DomainError("MixedParams: horizon_T must be positive");
    if (grid_n < 1) throw DomainError("MixedParams: grid_n must be positive");
    fgn.validate();
    fou2.validate();
    if (!(fgn.hurst > 0.5)) throw DomainError("MixedParams: fGn hurst must exceed 1/2");
    if (!close_rel(fou2.dt, dt(), 1e-12)) throw DomainError("MixedParams: fou2.dt must equal T/n");
    if (!close_rel(fgn.sigma2, std::pow(dt(), 2.0 * fgn.hurst), 1e-12))
        throw DomainError("MixedParams: fgn.sigma2 must equal (T/n)^{2H}");
}

double fgn_acvf(const FgnParams& p, long k) {
    p.validate();
    const double kk = static_cast<double>(k < 0 ? -k : k);
    if (kk == 0.0) return p.sigma2;
    const double two_h = 2.0 * p.hurst;
    if (kk < 64.0) {
        return 0.5 * p.sigma2 *
               (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) + std::pow(kk - 1.0, two_h));
    }
    // (1+x)^{2H} + (1-x)^{2H} - 2 = 2 Σ_{j>=1} C(2H, 2j) x^{2j} with x = 1/k.
    const double x2 = 1.0 / (kk * kk);
    double binom = two_h * (two_h - 1.0) / 2.0;  // C(2H, 2)
    double power = x2;
    double sum = 0.0;
    for (int n = 2; n < 200; n += 2) {
        const double term = binom * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        binom *= (two_h - n) / (n + 1.0) * (two_h - n - 1.0) / (n + 2.0);
        power *= x2;
    }
    return p.sigma2 * std::pow(kk, two_h) * sum;
}

AcvfSequence fgn_acvf_sequence(const FgnParams& p, long max_lag, double dt) {
    check_lag(max_lag, "fgn_acvf_sequence");
    Eigen::VectorXd v(max_lag + 1);
    for (long k = 0; k <= max_lag; ++k) v(k) = fgn_acvf(p, k);
    return {dt, std::move(v)};
}

double doob_ou_cov(double hurst, double alpha, double tau) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("doob_ou_cov: hurst must lie in (0, 1)");
    if (!(alpha > 0.0)) throw DomainError("doob_ou_cov: alpha must be positive");
    if (!(tau >= 0.0)) throw DomainError("doob_ou_cov: tau must be non-negative");
    // ½(H/α)^{2H}[e^{ατ} + e^{-ατ} - e^{-ατ}(e^{ατ/H} - 1)^{2H}], rearranged as
    // ½(H/α)^{2H}[e^{-ατ} + e^{ατ}(1 - (1 - e^{-ατ/H})^{2H})].
    const double scale = 0.5 * std::pow(hurst / alpha, 2.0 * hurst);
    const double at = alpha * tau;
    const double tail = -std::expm1(2.0 * hurst * std::log1p(-std::exp(-at / hurst)));
    return scale * (std::exp(-at) + (tail > 0.0 ? std::exp(at + std::log(tail)) : 0.0));
}

double fou2_acvf(const Fou2Params& p, long m) {
    p.validate();
    check_lag(m, "fou2_acvf");
    const Fou2Kernel kernel(p);
    return kernel.q(static_cast<double>(m) * p.dt);
}

AcvfSequence fou2_acvf_sequence(const Fou2Params& p, long max_lag) {
    p.validate();
    check_lag(max_lag, "fou2_acvf_sequence");
    const Fou2Kernel kernel(p);
    Eigen::VectorXd v(max_lag + 1);
    // Q(τ+h) = e^{-γh} Q(τ) + K ∫_τ^{τ+h} e^{γ(2u-τ-h)} g(u) du
    const double decay = std::exp(-p.gamma * p.dt);
    v(0) = kernel.K * kernel.B / p.gamma;
    for (long m = 0; m < max_lag; ++m) {
        const double lo = static_cast<double>(m) * p.dt;
        const double hi = static_cast<double>(m + 1) * p.dt;
        v(m + 1) = decay * v(m) + kernel.K * kernel.q_integral(lo, hi, hi);
    }
    return {p.dt, std::move(v)};
}

double fou2_increment_acvf(const Fou2Params& p, long m) {
    p.validate();
    check_lag(m, "fou2_increment_acvf");
    const Fou2Kernel kernel(p);
    auto q_at = [&](long lag) { return kernel.q(static_cast<double>(lag < 0 ? -lag : lag) * p.dt); };
    const double q_mid = q_at(m);
    if (kernel.use_direct_difference()) return kernel.increment(m, q_at(m - 1), q_mid, q_at(m + 1));
    return kernel.increment(m, 0.0, q_mid, 0.0);
}

AcvfSequence fou2_increment_acvf_sequence(const Fou2Params& p, long max_lag) {
    p.validate();
    check_lag(max_lag, "fou2_increment_acvf_sequence");
    const Fou2Kernel kernel(p);
    const AcvfSequence q = fou2_acvf_sequence(p, max_lag + 1);
    Eigen::VectorXd v(max_lag + 1);
    for (long m = 0; m <= max_lag; ++m) v(m) = kernel.increment(m, q(m - 1), q(m), q(m + 1));
    return {p.dt, std::move(v)};
}

double mixed_acvf(const MixedParams& p, long k) {
    p.validate();
    check_lag(k, "mixed_acvf");
    const double c = fou2_increment_acvf(p.fou2, k);
    const double fgn = fgn_acvf(p.fgn, k);
    if (k == 0) return p.sigma2_bm * p.dt() + fgn + c;
    return fgn + c;
}

AcvfSequence mixed_acvf_sequence(const MixedParams& p, long max_lag) {
    p.validate();
    check_lag(max_lag, "mixed_acvf_sequence");
    AcvfSequence out = fou2_increment_acvf_sequence(p.fou2, max_lag);
    for (long k = 0; k <= max_lag; ++k) out.values(k) = fgn_acvf(p.fgn, k) + out.values(k);
    out.values(0) = p.sigma2_bm * p.dt() + out.values(0);
    return out;
}

double aggregated_acvf(const AcvfSequence& base, long m_agg, long j) {
    if (m_agg < 1) throw DomainError("aggregated_acvf: m_agg must be positive");
    check_lag(j, "aggregated_acvf");
    const long needed = j * m_agg + m_agg - 1;
    if (base.max_lag() < needed)
        throw DomainError("aggregated_acvf: base sequence needs lags up to " + std::to_string(needed));
    double sum = 0.0;
    for (long i = -(m_agg - 1); i <= m_agg - 1; ++i)
        sum += static_cast<double>(m_agg - (i < 0 ? -i : i)) * base(j * m_agg + i);
    return sum;
}

AcvfSequence aggregated_acvf_sequence(const AcvfSequence& base, long m_agg, long max_j) {
    check_lag(max_j, "aggregated_acvf_sequence");
    Eigen::VectorXd v(max_j + 1);
    for (long j = 0; j <= max_j; ++j) v(j) = aggregated_acvf(base, m_agg, j);
    return {base.dt * static_cast<double>(m_agg), std::move(v)};
}

}  // namespace mfgn
