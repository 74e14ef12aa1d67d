#include "mfgn/simulate.hpp"

#include <cmath>
#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "mfgn/errors.hpp"
#include "mfgn/rng.hpp"

namespace mfgn {

namespace {

// Negative embedding eigenvalues smaller than this fraction of the largest
// are treated as round-off and zeroed.
constexpr double kEigenRoundoff = 1e-12;

Eigen::VectorXd sample_cholesky(const AcvfSequence& acvf, long n, CounterRng& rng) {
    const Eigen::MatrixXd cov = toeplitz(acvf.values, n);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw BreakdownError("sample_path: covariance matrix is not positive definite");
    Eigen::VectorXd z(n);
    for (long i = 0; i < n; ++i) z(i) = rng.normal();
    return llt.matrixL() * z;
}

Eigen::VectorXd sample_circulant(const Eigen::VectorXd& lambda, long n, CounterRng& rng) {
    const long m = lambda.size();
    std::vector<std::complex<double>> w(m), y;
    for (long k = 0; k < m; ++k) {
        const double a = rng.normal();
        const double b = rng.normal();
        w[k] = std::sqrt(lambda(k) / static_cast<double>(m)) * std::complex<double>(a, b);
    }
    Eigen::FFT<double> fft;
    fft.fwd(y, w);
    Eigen::VectorXd x(n);
    for (long j = 0; j < n; ++j) x(j) = y[j].real();
    return x;
}

}  // namespace

void SimConfig::validate() const {
    if (n < 2) throw DomainError("simulate: n must be at least 2");
    if (method == SimMethod::cholesky && n > kCholeskyMaxN)
        throw DomainError("simulate: cholesky is limited to n <= " + std::to_string(kCholeskyMaxN));
}

Eigen::VectorXd circulant_eigenvalues(const AcvfSequence& acvf, long n) {
    const long m = 2 * (n - 1);
    std::vector<double> c(m);
    for (long j = 0; j < n; ++j) c[j] = acvf.values(j);
    for (long j = 1; j < n - 1; ++j) c[m - j] = acvf.values(j);
    std::vector<std::complex<double>> spec;
    Eigen::FFT<double> fft;
    fft.fwd(spec, c);
    Eigen::VectorXd lambda(m);
    for (long k = 0; k < m; ++k) lambda(k) = spec[k].real();
    return lambda;
}

Eigen::VectorXd sample_path(const AcvfSequence& acvf, const SimConfig& cfg) {
    cfg.validate();
    acvf.validate();
    if (acvf.max_lag() < cfg.n - 1)
        throw DomainError("sample_path: autocovariances needed up to lag " + std::to_string(cfg.n - 1));
    CounterRng rng(cfg.seed, cfg.stream);
    if (cfg.method == SimMethod::cholesky) return sample_cholesky(acvf, cfg.n, rng);

    Eigen::VectorXd lambda = circulant_eigenvalues(acvf, cfg.n);
    const double floor = -kEigenRoundoff * lambda.maxCoeff();
    if (lambda.minCoeff() < floor) {
        if (cfg.n > kCholeskyMaxN)
            throw BreakdownError("sample_path: circulant embedding has negative eigenvalue " +
                                 format_real(lambda.minCoeff()) + " and n is too large for cholesky");
        return sample_cholesky(acvf, cfg.n, rng);
    }
    lambda = lambda.cwiseMax(0.0);
    return sample_circulant(lambda, cfg.n, rng);
}

Eigen::VectorXd sample_acvf(std::span<const double> path, long max_lag, bool demean) {
    const long n = static_cast<long>(path.size());
    if (n < 1) throw DomainError("sample_acvf: empty path");
    if (max_lag < 0 || max_lag >= n) throw DomainError("sample_acvf: max_lag must lie in [0, n)");
    double mean = 0.0;
    if (demean) {
        for (double v : path) mean += v;
        mean /= static_cast<double>(n);
    }
    Eigen::VectorXd out(max_lag + 1);
    for (long k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (long t = 0; t + k < n; ++t) acc += (path[t] - mean) * (path[t + k] - mean);
        out(k) = acc / static_cast<double>(n);
    }
    return out;
}

double quadratic_variation(std::span<const double> path) {
    double acc = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double d = path[k] - path[k - 1];
        acc += d * d;
    }
    return acc;
}

Eigen::VectorXd aggregate_series(std::span<const double> y, long m) {
    if (m < 1) throw DomainError("aggregate_series: block length must be positive");
    const long blocks = static_cast<long>(y.size()) / m;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(blocks);
    for (long b = 0; b < blocks; ++b)
        for (long i = 0; i < m; ++i) out(b) += y[b * m + i];
    return out;
}

Eigen::VectorXd cumulative_sum(std::span<const double> y, double x0) {
    Eigen::VectorXd out(y.size() + 1);
    out(0) = x0;
    for (std::size_t k = 0; k < y.size(); ++k) out(k + 1) = out(k) + y[k];
    return out;
}

void write_path_csv(std::ostream& out, std::span<const double> path) {
    out << "index,value\n";
    for (std::size_t k = 0; k < path.size(); ++k) out << k << ',' << format_real(path[k]) << '\n';
}

}  // namespace mfgn
