#pragma once

#include "mfgn/acvf.hpp"

namespace mfgn {

/// Fractional Gaussian noise: unit-lag increments of fBm, increment variance sigma2.
struct FgnParams {
    double hurst = 0.7;
    double sigma2 = 1.0;

    void validate() const;
};

/// fOU process of the second kind (Doob transform with α = 1, Langevin rate gamma)
/// sampled on a grid with step dt.
struct Fou2Params {
    double hurst = 0.7;
    double gamma = 0.3;
    double dt = 1.0;

    /// hurst must lie in (1/2 + 1e-6, 1 - 1e-9); gamma, dt > 0.
    void validate() const;
};

/// Increments of σW + B^H + U^{(D,γ)} on an n-point grid over [0, T].
///
/// fgn.sigma2 is pinned to (T/n)^{2H}, the increment variance of a unit-scale
/// fBm over one grid step, and fou2.dt to T/n; use make() to keep them in sync.
struct MixedParams {
    double sigma2_bm = 0.0;
    FgnParams fgn;
    Fou2Params fou2;
    double horizon_T = 1.0;
    long grid_n = 1;

    static MixedParams make(double sigma2_bm, double hurst_fgn, double hurst_fou2, double gamma,
                            double horizon_T, long grid_n);

    double dt() const { return horizon_T / static_cast<double>(grid_n); }
    void validate() const;
};

double fgn_acvf(const FgnParams& p, long k);
AcvfSequence fgn_acvf_sequence(const FgnParams& p, long max_lag, double dt = 1.0);

/// Stationary covariance of the Doob transform e^{-αt} B^H_{a_t}, a_t = (H/α)e^{αt/H}, at lag tau.
double doob_ou_cov(double hurst, double alpha, double tau);

/// Stationary fOU₂ autocovariance at lag m (time m·dt).
double fou2_acvf(const Fou2Params& p, long m);
/// Lags 0..max_lag, accumulated step by step over the grid.
AcvfSequence fou2_acvf_sequence(const Fou2Params& p, long max_lag);

/// Autocovariance of the fOU₂ increments U_{t_{k+1}} - U_{t_k} at lag m.
double fou2_increment_acvf(const Fou2Params& p, long m);
AcvfSequence fou2_increment_acvf_sequence(const Fou2Params& p, long max_lag);

/// Autocovariance of the mixed increments at lag k.
double mixed_acvf(const MixedParams& p, long k);
AcvfSequence mixed_acvf_sequence(const MixedParams& p, long max_lag);

/// Covariance at aggregate lag j of non-overlapping m_agg-sums of the base series.
/// Needs base lags up to j*m_agg + m_agg - 1.
double aggregated_acvf(const AcvfSequence& base, long m_agg, long j);
AcvfSequence aggregated_acvf_sequence(const AcvfSequence& base, long m_agg, long max_j);

}  // namespace mfgn
