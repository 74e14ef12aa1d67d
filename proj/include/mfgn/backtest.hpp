#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mfgn/process.hpp"
#include "mfgn/simulate.hpp"

namespace mfgn {

enum class ViolationMode { es, var };

struct NamedForecaster {
    std::string name;
    ProcessSpec process;
    /// Mixed forecasters only: replace fou2.gamma by calibrate_gamma against the truth.
    bool calibrate = false;
};

struct BacktestConfig {
    FarimaSpec truth;
    std::vector<NamedForecaster> forecasters;
    long window = 512;
    long horizon = 1;
    double alpha = 0.05;
    long steps = 1000;
    std::vector<std::uint64_t> seeds = default_seeds();
    double eta = 0.0;
    ViolationMode mode = ViolationMode::es;
    SimMethod method = SimMethod::circulant;
    int threads = 1;
    bool keep_records = true;

    static std::vector<std::uint64_t> default_seeds();  // 1..16
    long path_length() const { return window + steps + horizon - 1; }
    void validate() const;
};

struct BacktestRecord {
    std::uint64_t seed = 0;
    long step = 0;
    double mean = 0.0;
    double variance = 0.0;
    double var = 0.0;
    double es = 0.0;
    double realized = 0.0;
    bool violated = false;
};

struct CalibrationResult {
    double gamma = 0.0;
    double objective = 0.0;
    double v_target = 0.0;
    double v_model = 0.0;
    bool bound_hit = false;
};

struct BacktestResult {
    long violations = 0;
    double expected_violations = 0.0;  // α · steps · number of seeds
    double ratio = 0.0;
    double ratio_volatility = 0.0;     // sample standard deviation of per-seed ratios
    std::vector<double> seed_ratios;
    std::vector<BacktestRecord> records;
    bool calibrated = false;
    CalibrationResult calibration;
};

/// Violations are treated as independent across steps even though windows
/// overlap and the series is dependent, so ratios are descriptive only.
inline constexpr const char* kBacktestCaveat =
    "note: violations are counted as if independent across steps; overlapping windows on a "
    "dependent series make this approximate, and no formal coverage test is applied";

std::map<std::string, BacktestResult> run_backtest(const BacktestConfig& cfg);

double violation_ratio(long violations, double expected);

/// Conditional variance of the horizon-h predictor from a window of n observations.
double conditional_variance(const AcvfSequence& acvf, long window, long horizon);

struct CalibrationOptions {
    double lower = 0.01;
    double upper = 10.0;
    double tol = 1e-4;
    int grid = 64;
};

/// Minimizes |v_model(γ) - v_target| over [lower, upper]: a log-spaced grid
/// locates the basin, golden-section search refines it to tol.
CalibrationResult calibrate_gamma(double v_target, const std::function<double(double)>& v_model,
                                  const CalibrationOptions& opts = {});

CalibrationResult calibrate_gamma(const FarimaSpec& truth, const MixedParams& tmpl, long window,
                                  long horizon, const CalibrationOptions& opts = {});

/// `forecaster,seed,step,mean,variance,var,es,realized,violation`
void write_backtest_records_csv(std::ostream& out, const std::map<std::string, BacktestResult>& results);
/// `forecaster,ratio,ratio_volatility`
void write_backtest_summary_csv(std::ostream& out, const std::map<std::string, BacktestResult>& results);

}  // namespace mfgn
