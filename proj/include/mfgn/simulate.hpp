#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>

#include <Eigen/Dense>

#include "mfgn/acvf.hpp"

namespace mfgn {

enum class SimMethod { cholesky, circulant };

/// Largest path length accepted by the dense Cholesky sampler.
inline constexpr long kCholeskyMaxN = 8192;

struct SimConfig {
    long n = 1024;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    SimMethod method = SimMethod::circulant;

    void validate() const;
};

/// Zero-mean Gaussian path with Toeplitz covariance from `acvf` (lags 0..n-1).
/// Circulant embedding falls back to Cholesky when the embedding has a
/// negative eigenvalue beyond round-off and n permits it.
Eigen::VectorXd sample_path(const AcvfSequence& acvf, const SimConfig& cfg);

/// Eigenvalues of the size 2(n-1) circulant embedding of γ_0..γ_{n-1}.
Eigen::VectorXd circulant_eigenvalues(const AcvfSequence& acvf, long n);

/// Biased (1/n) sample autocovariance about zero, or about the sample mean when demean is set.
Eigen::VectorXd sample_acvf(std::span<const double> path, long max_lag, bool demean = false);

double quadratic_variation(std::span<const double> path);

/// Non-overlapping block sums of length m; a trailing partial block is dropped.
Eigen::VectorXd aggregate_series(std::span<const double> y, long m);

/// Running sum x_0 + y_1 + ... + y_k, starting from x0.
Eigen::VectorXd cumulative_sum(std::span<const double> y, double x0 = 0.0);

/// CSV with header `index,value`.
void write_path_csv(std::ostream& out, std::span<const double> path);

}  // namespace mfgn
