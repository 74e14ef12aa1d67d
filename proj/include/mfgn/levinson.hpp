#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mfgn/errors.hpp"

namespace mfgn {

/// Innovation variance floor, relative to γ₀, below which the recursion aborts.
inline constexpr double kLevinsonBreakdown = 1e-14;

template <typename Scalar>
struct DurbinLevinson {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Vector coefficients;           // φ_{n,1..n}: x̂_{n+1} = Σ_j φ_{n,j} x_{n+1-j}
    Vector innovation_variances;   // v_0..v_n
};

/// Order-n Durbin–Levinson recursion on autocovariances acvf(0..n).
template <typename Derived>
DurbinLevinson<typename Derived::Scalar> durbin_levinson(const Eigen::MatrixBase<Derived>& acvf,
                                                         Eigen::Index n) {
    using Scalar = typename Derived::Scalar;
    using Vector = typename DurbinLevinson<Scalar>::Vector;
    if (n < 1) throw DomainError("durbin_levinson: order must be positive");
    if (acvf.size() < n + 1) throw DomainError("durbin_levinson: need autocovariances up to lag n");
    const Scalar g0 = acvf(0);
    if (!(g0 > Scalar(0))) throw DomainError("durbin_levinson: lag-0 autocovariance must be positive");

    Vector phi = Vector::Zero(n);
    Vector prev = Vector::Zero(n);
    Vector v(n + 1);
    v(0) = g0;
    for (Eigen::Index m = 1; m <= n; ++m) {
        Scalar acc = acvf(m);
        for (Eigen::Index j = 1; j < m; ++j) acc -= prev(j - 1) * acvf(m - j);
        const Scalar kappa = acc / v(m - 1);
        for (Eigen::Index j = 1; j < m; ++j) phi(j - 1) = prev(j - 1) - kappa * prev(m - j - 1);
        phi(m - 1) = kappa;
        v(m) = v(m - 1) * (Scalar(1) - kappa * kappa);
        if (!(v(m) > Scalar(kLevinsonBreakdown) * g0))
            throw BreakdownError("durbin_levinson: innovation variance collapsed at order " +
                                 std::to_string(m));
        prev.head(m) = phi.head(m);
    }
    return {phi, v};
}

/// Solves Toeplitz(acvf(0..n-1)) x = rhs with Levinson's algorithm, O(n²).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> levinson_solve(
    const Eigen::MatrixBase<DerivedA>& acvf, const Eigen::MatrixBase<DerivedB>& rhs) {
    using Scalar = typename DerivedA::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = rhs.size();
    if (n < 1) throw DomainError("levinson_solve: empty right-hand side");
    if (acvf.size() < n) throw DomainError("levinson_solve: need autocovariances up to lag n-1");
    const Scalar g0 = acvf(0);
    if (!(g0 > Scalar(0))) throw DomainError("levinson_solve: lag-0 autocovariance must be positive");

    // Work with the unit-diagonal matrix r = acvf / γ₀.
    const Vector r = acvf.head(n) / g0;
    const Vector b = rhs / g0;
    Vector x(n), y(n), z(n);
    x(0) = b(0);
    if (n == 1) return x;
    y(0) = -r(1);
    Scalar beta = 1;
    Scalar alpha = -r(1);
    for (Eigen::Index k = 1; k < n; ++k) {
        beta = (Scalar(1) - alpha * alpha) * beta;
        if (!(beta > Scalar(kLevinsonBreakdown)))
            throw BreakdownError("levinson_solve: innovation variance collapsed at order " +
                                 std::to_string(k));
        Scalar acc = b(k);
        for (Eigen::Index i = 0; i < k; ++i) acc -= r(i + 1) * x(k - 1 - i);
        const Scalar mu = acc / beta;
        for (Eigen::Index i = 0; i < k; ++i) x(i) += mu * y(k - 1 - i);
        x(k) = mu;
        if (k < n - 1) {
            Scalar acc2 = -r(k + 1);
            for (Eigen::Index i = 0; i < k; ++i) acc2 -= r(i + 1) * y(k - 1 - i);
            alpha = acc2 / beta;
            for (Eigen::Index i = 0; i < k; ++i) z(i) = y(i) + alpha * y(k - 1 - i);
            y.head(k) = z.head(k);
            y(k) = alpha;
        }
    }
    return x;
}

}  // namespace mfgn
