#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace mfgn {

/// Autocovariance values at lags 0..L on a grid with step dt.
struct AcvfSequence {
    double dt = 1.0;
    Eigen::VectorXd values;

    AcvfSequence() = default;
    AcvfSequence(double step, Eigen::VectorXd v);

    Eigen::Index max_lag() const { return values.size() - 1; }

    /// γ at a signed lag, using γ(-l) = γ(l).
    double operator()(Eigen::Index lag) const { return values(lag < 0 ? -lag : lag); }

    /// Throws DomainError unless dt > 0, the sequence is non-empty and values[0] > 0.
    void validate() const;
};

/// Dense symmetric Toeplitz matrix built from the first n entries of a column.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> toeplitz(
    const Eigen::MatrixBase<Derived>& column, Eigen::Index n) {
    using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix t(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) t(i, j) = column(i > j ? i - j : j - i);
    return t;
}

template <typename Derived>
auto toeplitz(const Eigen::MatrixBase<Derived>& column) {
    return toeplitz(column, column.size());
}

/// PSD check of the Toeplitz matrix of `column` by pivoted LDLᵀ: every pivot
/// must exceed -rel_tol * column(0).
template <typename Derived>
bool is_toeplitz_psd(const Eigen::MatrixBase<Derived>& column, double rel_tol = 1e-10) {
    const auto t = toeplitz(column);
    Eigen::LDLT<std::decay_t<decltype(t)>> ldlt(t);
    if (ldlt.info() != Eigen::Success) return false;
    return ldlt.vectorD().minCoeff() >= -rel_tol * std::abs(column(0));
}

/// "%.17g" rendering; round-trips every finite double.
std::string format_real(double x);

/// CSV with header `lag,value`, one row per lag.
void write_acvf_csv(std::ostream& out, const AcvfSequence& acvf);

/// Reads the `lag,value` CSV; dt is not stored in the file and must be supplied.
AcvfSequence read_acvf_csv(std::istream& in, double dt = 1.0);

}  // namespace mfgn
