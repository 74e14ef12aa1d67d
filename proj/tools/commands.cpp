#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include <mfgn/backtest.hpp>
#include <mfgn/errors.hpp>
#include <mfgn/forecast.hpp>
#include <mfgn/risk.hpp>

#include "config.hpp"

namespace mfgn::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const RunConfig& c, const std::string& name) {
    std::filesystem::create_directories(c.output);
    const auto path = std::filesystem::path(c.output) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    return f;
}

void cmd_acvf(const RunConfig& c, bool compare, std::ostream& out) {
    const long L = c.acvf.max_lag;
    if (!compare) {
        auto f = open_output(c, "acvf.csv");
        write_acvf_csv(f, process_acvf(c.process, L));
        out << "wrote " << (std::filesystem::path(c.output) / "acvf.csv").string() << '\n';
        return;
    }
    const auto* mixed = std::get_if<MixedParams>(&c.process);
    if (!mixed) throw ConfigError("process.kind: --compare needs a mixed process");
    const AcvfSequence fgn = fgn_acvf_sequence(mixed->fgn, L, mixed->dt());
    const AcvfSequence fou2 = fou2_increment_acvf_sequence(mixed->fou2, L);
    const AcvfSequence mix = mixed_acvf_sequence(*mixed, L);
    auto f = open_output(c, "acvf_compare.csv");
    f << "lag,fgn,fou2_increment,mixed\n";
    for (long k = 0; k <= L; ++k)
        f << k << ',' << format_real(fgn.values(k)) << ',' << format_real(fou2.values(k)) << ','
          << format_real(mix.values(k)) << '\n';
    out << "wrote " << (std::filesystem::path(c.output) / "acvf_compare.csv").string() << '\n';
}

void cmd_simulate(const RunConfig& c, std::ostream& out) {
    const SimConfig sim{c.simulate.n, c.simulate.seed, c.simulate.stream, c.simulate.method};
    Eigen::VectorXd path = sample_path(process_acvf(c.process, sim.n - 1), sim);
    path.array() += process_mean(c.process);
    auto f = open_output(c, "path.csv");
    write_path_csv(f, {path.data(), static_cast<std::size_t>(path.size())});
    out << "wrote " << (std::filesystem::path(c.output) / "path.csv").string() << '\n';
}

ForecastResult run_forecast(const RunConfig& c) {
    const auto& data = c.forecast.data;
    if (data.empty()) throw ConfigError("forecast.data: at least one observation is required");
    const long n = static_cast<long>(data.size());
    const AcvfSequence acvf = process_acvf(c.process, n + c.forecast.horizon - 1);
    return predict(acvf, data, process_mean(c.process), c.forecast.horizon);
}

void cmd_forecast(const RunConfig& c, std::ostream& out) {
    const ForecastResult r = run_forecast(c);
    auto f = open_output(c, "forecast.csv");
    f << "window,horizon,mean,variance\n"
      << r.window << ',' << r.horizon << ',' << format_real(r.mean) << ',' << format_real(r.variance) << '\n';
    out << "mean=" << format_real(r.mean) << " variance=" << format_real(r.variance) << '\n';
}

void cmd_risk(const RunConfig& c, std::ostream& out) {
    double mean, variance;
    if (c.risk.mean) {
        mean = *c.risk.mean;
        variance = *c.risk.variance;
    } else {
        const ForecastResult r = run_forecast(c);
        mean = r.mean;
        variance = r.variance;
    }
    std::vector<RiskReport> reports;
    for (double a : c.risk.alpha) reports.push_back(risk_report(mean, variance, a, c.risk.eta, c.risk.prev));
    auto f = open_output(c, "risk.csv");
    write_risk_csv(f, reports);
    write_risk_csv(out, reports);
}

void cmd_calibrate(const RunConfig& c, std::ostream& out) {
    const auto* mixed = std::get_if<MixedParams>(&c.process);
    if (!mixed) throw ConfigError("process.kind: calibrate needs a mixed template process");
    const CalibrationResult r =
        calibrate_gamma(c.backtest.truth, *mixed, c.calibrate.window, c.calibrate.horizon, c.calibrate.options);
    auto f = open_output(c, "calibration.csv");
    f << "gamma,objective,v_target,v_model,bound_hit\n"
      << format_real(r.gamma) << ',' << format_real(r.objective) << ',' << format_real(r.v_target) << ','
      << format_real(r.v_model) << ',' << (r.bound_hit ? 1 : 0) << '\n';
    out << "gamma=" << format_real(r.gamma) << " objective=" << format_real(r.objective) << '\n';
    if (r.bound_hit) out << "warning: optimum lies at a search bound\n";
}

void cmd_backtest(const RunConfig& c, std::ostream& out) {
    const auto results = run_backtest(c.backtest);
    if (c.backtest.keep_records) {
        auto f = open_output(c, "backtest_records.csv");
        write_backtest_records_csv(f, results);
    }
    auto f = open_output(c, "backtest_summary.csv");
    write_backtest_summary_csv(f, results);
    write_backtest_summary_csv(out, results);
    for (const auto& [name, r] : results)
        if (r.calibrated) {
            out << name << ": calibrated gamma=" << format_real(r.calibration.gamma) << '\n';
            if (r.calibration.bound_hit) out << "warning: " << name << " calibration hit a search bound\n";
        }
    out << kBacktestCaveat << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Autocovariances, simulation, forecasting and risk backtests for long-memory Gaussian processes"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory (overrides `output`)");
    app.add_option("--seed", seed, "base seed (overrides simulate.seed and rebases backtest.seeds)");
    app.add_option("--threads", threads, "worker threads for the backtest");

    bool compare = false;
    std::optional<long> max_lag;
    auto* acvf = app.add_subcommand("acvf", "write the autocovariance table of `process`");
    acvf->add_flag("--compare", compare, "fGn, fOU2-increment and mixed columns side by side");
    acvf->add_option("--max-lag", max_lag, "largest lag (overrides acvf.max_lag)");
    auto* simulate = app.add_subcommand("simulate", "sample a path of `process`");
    auto* forecast = app.add_subcommand("forecast", "predict from forecast.data under `process`");
    auto* risk = app.add_subcommand("risk", "VaR and ES for a Gaussian forecast");
    auto* calibrate = app.add_subcommand("calibrate", "fit gamma of a mixed `process` to backtest.truth");
    auto* backtest = app.add_subcommand("backtest", "rolling VaR/ES backtest on simulated FARIMA paths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        RunConfig c = config_path.empty() ? default_config() : load_config(config_path);
        if (!out_dir.empty()) c.output = out_dir;
        if (seed) {
            c.simulate.seed = *seed;
            for (std::size_t i = 0; i < c.backtest.seeds.size(); ++i) c.backtest.seeds[i] = *seed + i;
        }
        if (threads) {
            if (*threads < 1) throw ConfigError("--threads: must be positive");
            c.backtest.threads = *threads;
        }
        if (max_lag) {
            if (*max_lag < 0) throw ConfigError("--max-lag: must be non-negative");
            c.acvf.max_lag = *max_lag;
        }

        if (*acvf) cmd_acvf(c, compare, out);
        else if (*simulate) cmd_simulate(c, out);
        else if (*forecast) cmd_forecast(c, out);
        else if (*risk) cmd_risk(c, out);
        else if (*calibrate) cmd_calibrate(c, out);
        else if (*backtest) cmd_backtest(c, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace mfgn::cli
