#include "mfgn/farima.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "mfgn/errors.hpp"
#include "mfgn/quadrature.hpp"
#include "mfgn/specfun.hpp"

namespace mfgn {

namespace {

using cplx = std::complex<double>;

const Tolerances kSeriesTol{1e-15, 100000};

// Θ(L) as a polynomial: c_0 = 1, c_j = -θ_j.
std::vector<double> ma_polynomial(const FarimaSpec& spec) {
    std::vector<double> c(spec.ma.size() + 1, 1.0);
    for (std::size_t j = 0; j < spec.ma.size(); ++j) c[j + 1] = -spec.ma[j];
    return c;
}

// ψ_k = Σ_s c_s c_{s-|k|}, k = -q..q, stored at k + q.
Eigen::VectorXd ma_autocorrelation(const FarimaSpec& spec) {
    const auto c = ma_polynomial(spec);
    const int q = spec.q();
    Eigen::VectorXd psi(2 * q + 1);
    for (int k = -q; k <= q; ++k) {
        const int ak = std::abs(k);
        double s = 0.0;
        for (int j = ak; j <= q; ++j) s += c[j] * c[j - ak];
        psi(k + q) = s;
    }
    return psi;
}

// Fractional-noise autocovariance with unit innovation variance.
Eigen::VectorXd fractional_noise_acvf(double d, long max_lag) {
    Eigen::VectorXd g(max_lag + 1);
    g(0) = std::exp(ln_gamma(1.0 - 2.0 * d).value - 2.0 * ln_gamma(1.0 - d).value);
    for (long k = 1; k <= max_lag; ++k) g(k) = g(k - 1) * (k - 1 + d) / (k - d);
    return g;
}

AcvfSequence acvf_filtered_fractional_noise(const FarimaSpec& spec, long max_lag) {
    const int q = spec.q();
    const Eigen::VectorXd psi = ma_autocorrelation(spec);
    const Eigen::VectorXd g = fractional_noise_acvf(spec.d, max_lag + q);
    Eigen::VectorXd out(max_lag + 1);
    for (long i = 0; i <= max_lag; ++i) {
        double s = 0.0;
        for (int k = -q; k <= q; ++k) s += psi(k + q) * g(std::abs(i - k));
        out(i) = spec.sigma2_eps * s;
    }
    return {1.0, std::move(out)};
}

// Exact ARMA(p, q) autocovariance: solve the first p+1 Yule–Walker-type
// equations, then run the AR recursion.
AcvfSequence acvf_arma(const FarimaSpec& spec, long max_lag) {
    const int p = spec.p();
    const int q = spec.q();
    const auto c = ma_polynomial(spec);

    // Impulse response h_j of Θ/Φ for j = 0..q.
    std::vector<double> h(q + 1, 0.0);
    for (int j = 0; j <= q; ++j) {
        double v = c[j];
        for (int i = 1; i <= std::min(j, p); ++i) v += spec.ar[i - 1] * h[j - i];
        h[j] = v;
    }
    auto rhs_at = [&](long k) {
        double s = 0.0;
        for (long j = k; j <= q; ++j) s += c[j] * h[j - k];
        return spec.sigma2_eps * s;
    };

    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p + 1, p + 1);
    Eigen::VectorXd b(p + 1);
    for (int k = 0; k <= p; ++k) {
        for (int i = 1; i <= p; ++i) a(k, std::abs(k - i)) -= spec.ar[i - 1];
        b(k) = rhs_at(k);
    }
    const Eigen::VectorXd head = a.partialPivLu().solve(b);

    const long len = std::max<long>(max_lag, p);
    Eigen::VectorXd g(len + 1);
    g.head(p + 1) = head;
    for (long k = p + 1; k <= len; ++k) {
        double v = rhs_at(k);
        for (int i = 1; i <= p; ++i) v += spec.ar[i - 1] * g(k - i);
        g(k) = v;
    }
    return {1.0, g.head(max_lag + 1)};
}

}  // namespace

void FarimaSpec::validate() const {
    if (!(d > -0.5 && d < 0.5)) throw DomainError("FarimaSpec: d must lie in (-1/2, 1/2)");
    if (!(sigma2_eps > 0.0)) throw DomainError("FarimaSpec: sigma2_eps must be positive");
    if (!std::isfinite(mu)) throw DomainError("FarimaSpec: mu must be finite");
    for (double v : ar)
        if (!std::isfinite(v)) throw DomainError("FarimaSpec: AR coefficients must be finite");
    for (double v : ma)
        if (!std::isfinite(v)) throw DomainError("FarimaSpec: MA coefficients must be finite");
    if (!ar.empty()) {
        const Eigen::VectorXcd roots = ar_roots(ar);
        if (roots.cwiseAbs().maxCoeff() >= 1.0)
            throw DomainError("FarimaSpec: AR polynomial is not stationary");
    }
}

Eigen::VectorXcd ar_roots(const std::vector<double>& ar) {
    if (ar.empty()) throw DomainError("ar_roots: empty AR coefficient sequence");
    if (ar.back() == 0.0)
        throw DomainError("ar_roots: last AR coefficient is zero (degenerate polynomial degree)");
    const auto p = static_cast<Eigen::Index>(ar.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = ar[j];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("ar_roots: eigenvalue solver failed");
    Eigen::VectorXcd roots = solver.eigenvalues();
    std::sort(roots.begin(), roots.end(), [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return roots;
}

Eigen::VectorXd ma_coefficients(const FarimaSpec& spec, long n_terms) {
    spec.validate();
    if (n_terms < 1) throw DomainError("ma_coefficients: n_terms must be positive");
    const auto c = ma_polynomial(spec);
    Eigen::VectorXd frac(n_terms);
    frac(0) = 1.0;
    for (long j = 1; j < n_terms; ++j) frac(j) = frac(j - 1) * (j - 1 + spec.d) / static_cast<double>(j);

    Eigen::VectorXd psi(n_terms);
    const long q = spec.q();
    const long p = spec.p();
    for (long j = 0; j < n_terms; ++j) {
        double v = 0.0;
        for (long s = 0; s <= std::min(q, j); ++s) v += c[s] * frac(j - s);
        for (long i = 1; i <= std::min(p, j); ++i) v += spec.ar[i - 1] * psi(j - i);
        psi(j) = v;
    }
    return psi;
}

MaTruncatedAcvf acvf_ma_truncated(const FarimaSpec& spec, long max_lag, long n_terms) {
    if (max_lag < 0) throw DomainError("acvf_ma_truncated: max_lag must be non-negative");
    if (n_terms <= 2 * max_lag)
        throw DomainError("acvf_ma_truncated: n_terms must exceed twice max_lag");
    const Eigen::VectorXd psi = ma_coefficients(spec, n_terms);

    MaTruncatedAcvf out;
    out.truncated.resize(max_lag + 1);
    out.tail = Eigen::VectorXd::Zero(max_lag + 1);
    for (long k = 0; k <= max_lag; ++k)
        out.truncated(k) = spec.sigma2_eps * psi.head(n_terms - k).dot(psi.segment(k, n_terms - k));

    if (spec.d != 0.0) {
        const double d = spec.d;
        double theta1 = 1.0;
        for (double t : spec.ma) theta1 -= t;
        double phi1 = 1.0;
        for (double f : spec.ar) phi1 -= f;
        const double amp = theta1 / phi1 * std::exp(-ln_gamma(d).value);
        const double scale = spec.sigma2_eps * amp * amp;
        const double expo = 1.0 / (1.0 - 2.0 * d);
        for (long k = 0; k <= max_lag; ++k) {
            // Σ_{j>=M} f(j), f(x) = x^{d-1}(x+k)^{d-1}, M = N - k:
            // ∫_M^∞ f + f(M)/2 - f'(M)/12, with x = M/t and t = s^{1/(1-2d)}.
            const double m = static_cast<double>(n_terms - k);
            const double kk = static_cast<double>(k);
            auto g = [&](double s) { return std::pow(1.0 + kk * std::pow(s, expo) / m, d - 1.0); };
            const double integral =
                std::pow(m, 2.0 * d - 1.0) * expo * integrate(g, 0.0, 1.0, {1e-13, 0.0, 200}).value;
            const double fm = std::pow(m, d - 1.0) * std::pow(m + kk, d - 1.0);
            const double dfm = fm * (d - 1.0) * (1.0 / m + 1.0 / (m + kk));
            out.tail(k) = scale * (integral + 0.5 * fm - dfm / 12.0);
        }
    }
    out.acvf = AcvfSequence(1.0, out.truncated + out.tail);
    return out;
}

double spectral_density(const FarimaSpec& spec, double omega) {
    const cplx z = std::polar(1.0, -omega);
    cplx theta = 1.0, phi = 1.0, zk = 1.0;
    const std::size_t n = std::max(spec.ar.size(), spec.ma.size());
    for (std::size_t k = 0; k < n; ++k) {
        zk *= z;
        if (k < spec.ma.size()) theta -= spec.ma[k] * zk;
        if (k < spec.ar.size()) phi -= spec.ar[k] * zk;
    }
    const double frac = std::pow(2.0 * std::abs(std::sin(0.5 * omega)), -2.0 * spec.d);
    return spec.sigma2_eps / (2.0 * std::numbers::pi) * std::norm(theta) / std::norm(phi) * frac;
}

double acvf_spectral_at(const FarimaSpec& spec, long k) {
    spec.validate();
    if (k < 0) k = -k;
    // ω = π s^{1/(1-2d)} absorbs the |ω|^{-2d} behaviour at the origin.
    const double expo = 1.0 / (1.0 - 2.0 * spec.d);
    const double kk = static_cast<double>(k);
    auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double omega = std::numbers::pi * std::pow(s, expo);
        const double jac = std::numbers::pi * expo * std::pow(s, expo - 1.0);
        return 2.0 * spectral_density(spec, omega) * std::cos(kk * omega) * jac;
    };
    const double scale = spec.sigma2_eps;
    return integrate(integrand, 0.0, 1.0, {1e-12, 1e-13 * scale, 20000}).value;
}

AcvfSequence acvf_spectral(const FarimaSpec& spec, const std::vector<long>& lags) {
    long max_lag = 0;
    for (long k : lags) {
        if (k < 0) throw DomainError("acvf_spectral: lags must be non-negative");
        max_lag = std::max(max_lag, k);
    }
    Eigen::VectorXd v = Eigen::VectorXd::Constant(max_lag + 1, std::nan(""));
    for (long k : lags) v(k) = acvf_spectral_at(spec, k);
    return {1.0, std::move(v)};
}

AcvfSequence acvf_spectral(const FarimaSpec& spec, long max_lag) {
    std::vector<long> lags(max_lag + 1);
    for (long k = 0; k <= max_lag; ++k) lags[k] = k;
    return acvf_spectral(spec, lags);
}

cplx sowell_C(double d, int h, cplx rho, int p) {
    if (p < 1) throw DomainError("sowell_C: p must be positive");
    const double lead = std::exp(ln_gamma(1.0 - 2.0 * d).value - 2.0 * ln_gamma(1.0 - d).value);
    const double ratio = pochhammer_ratio(d, h);
    const cplx first = std::pow(rho, 2 * p) * hyp2f1_unit(d + h, 1.0 - d + h, rho, kSeriesTol);
    const cplx second = hyp2f1_unit(d - h, 1.0 - d - h, rho, kSeriesTol);
    return lead * ratio * (first + second - 1.0);
}

SowellIntermediates sowell_intermediates(const FarimaSpec& spec) {
    spec.validate();
    if (spec.ar.empty()) throw DomainError("sowell_intermediates: requires p >= 1");
    SowellIntermediates out;
    out.roots = ar_roots(spec.ar);
    out.psi = ma_autocorrelation(spec);
    const Eigen::Index p = out.roots.size();
    out.zeta.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const cplx rj = out.roots(j);
        cplx denom = rj;
        for (Eigen::Index i = 0; i < p; ++i) denom *= 1.0 - out.roots(i) * rj;
        for (Eigen::Index m = 0; m < p; ++m) {
            if (m == j) continue;
            const cplx diff = rj - out.roots(m);
            if (std::abs(diff) < 1e-8)
                throw DomainError("sowell_intermediates: repeated AR roots are not supported");
            denom *= diff;
        }
        out.zeta(j) = 1.0 / denom;
    }
    return out;
}

AcvfSequence acvf_sowell(const FarimaSpec& spec, long max_lag) {
    spec.validate();
    if (max_lag < 0) throw DomainError("acvf_sowell: max_lag must be non-negative");
    if (spec.ar.empty()) return acvf_filtered_fractional_noise(spec, max_lag);
    if (spec.d == 0.0) return acvf_arma(spec, max_lag);

    const SowellIntermediates im = sowell_intermediates(spec);
    const int p = spec.p();
    const int q = spec.q();
    Eigen::VectorXd out(max_lag + 1);
    double scale = 0.0;
    for (long i = 0; i <= max_lag; ++i) {
        cplx sum = 0.0;
        for (int k = -q; k <= q; ++k) {
            for (int j = 0; j < p; ++j) {
                const int h = p + k - static_cast<int>(i);
                sum += im.psi_at(k) * im.zeta(j) * sowell_C(spec.d, h, im.roots(j), p);
            }
        }
        sum *= spec.sigma2_eps;
        if (i == 0) scale = std::abs(sum.real());
        if (std::abs(sum.imag()) > 1e-8 * std::max(std::abs(sum.real()), scale))
            throw ConsistencyError("acvf_sowell: imaginary residue " + std::to_string(sum.imag()) +
                                   " at lag " + std::to_string(i));
        out(i) = sum.real();
    }
    return {1.0, std::move(out)};
}

double aggregated_order(int p, double d, int q, long m_agg) {
    if (m_agg < 2) throw DomainError("aggregated_order: m_agg must be at least 2");
    if (p < 0 || q < 0) throw DomainError("aggregated_order: orders must be non-negative");
    return p + d + 1.0 + (q - p - d - 1.0) / static_cast<double>(m_agg);
}

}  // namespace mfgn
