#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <mfgn/backtest.hpp>
#include <mfgn/process.hpp>
#include <mfgn/simulate.hpp>

namespace mfgn::cli {

/// Invalid or unparsable configuration. The message names the key path, or
/// the line and column for syntax errors.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AcvfSection {
    long max_lag = 100;
};

struct SimulateSection {
    long n = 1024;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    SimMethod method = SimMethod::circulant;
};

struct ForecastSection {
    std::vector<double> data;  // oldest first
    long horizon = 1;
};

struct RiskSection {
    std::vector<double> alpha{0.01, 0.05, 0.1};
    double eta = 0.0;
    double prev = 1.0;
    std::optional<double> mean;
    std::optional<double> variance;
};

struct CalibrateSection {
    long window = 512;
    long horizon = 1;
    CalibrationOptions options;
};

struct RunConfig {
    ProcessSpec process = FgnParams{};
    AcvfSection acvf;
    SimulateSection simulate;
    ForecastSection forecast;
    RiskSection risk;
    CalibrateSection calibrate;
    BacktestConfig backtest;
    std::string output = "out";
};

/// Built-in configuration used when no file is given: FARIMA(1, 0.3, 1) truth
/// with φ = 0.5, θ = 0.2, and FARIMA, fGn and calibrated mixed forecasters.
RunConfig default_config();

/// Parses a JSON document over the defaults. Unknown keys are rejected and
/// every field is validated before anything is computed.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace mfgn::cli
