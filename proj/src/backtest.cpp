#include "mfgn/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <set>
#include <thread>

#include "mfgn/errors.hpp"
#include "mfgn/forecast.hpp"
#include "mfgn/risk.hpp"

namespace mfgn {

std::vector<std::uint64_t> BacktestConfig::default_seeds() {
    std::vector<std::uint64_t> s(16);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i + 1;
    return s;
}

void BacktestConfig::validate() const {
    truth.validate();
    if (forecasters.empty()) throw DomainError("backtest: at least one forecaster is required");
    std::set<std::string> names;
    for (const auto& f : forecasters) {
        if (f.name.empty()) throw DomainError("backtest: forecaster name must be non-empty");
        if (!names.insert(f.name).second) throw DomainError("backtest: duplicate forecaster name " + f.name);
        if (f.calibrate && !std::holds_alternative<MixedParams>(f.process))
            throw DomainError("backtest: only mixed forecasters can be calibrated (" + f.name + ")");
        mfgn::validate(f.process);
    }
    if (window < 1) throw DomainError("backtest: window must be positive");
    if (horizon < 1) throw DomainError("backtest: horizon must be positive");
    if (steps < 1) throw DomainError("backtest: steps must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("backtest: alpha must lie in (0, 1)");
    if (seeds.empty()) throw DomainError("backtest: at least one seed is required");
    if (eta < -1.0) throw DomainError("backtest: eta must be at least -1");
    if (threads < 1) throw DomainError("backtest: threads must be positive");
    SimConfig{path_length(), 0, 0, method}.validate();
}

double violation_ratio(long violations, double expected) {
    if (!(expected > 0.0)) throw DomainError("violation_ratio: expected must be positive");
    if (violations < 0) throw DomainError("violation_ratio: violations must be non-negative");
    return static_cast<double>(violations) / expected;
}

double conditional_variance(const AcvfSequence& acvf, long window, long horizon) {
    return Predictor(acvf, window, horizon).variance();
}

CalibrationResult calibrate_gamma(double v_target, const std::function<double(double)>& v_model,
                                  const CalibrationOptions& opts) {
    if (!(opts.lower > 0.0 && opts.upper > opts.lower))
        throw DomainError("calibrate_gamma: need 0 < lower < upper");
    if (opts.grid < 3) throw DomainError("calibrate_gamma: grid needs at least 3 points");
    auto objective = [&](double g) { return std::abs(v_model(g) - v_target); };

    const double log_lo = std::log(opts.lower), log_hi = std::log(opts.upper);
    std::vector<double> grid(opts.grid), values(opts.grid);
    for (int i = 0; i < opts.grid; ++i) {
        grid[i] = i + 1 == opts.grid ? opts.upper
                                     : std::exp(log_lo + (log_hi - log_lo) * i / (opts.grid - 1));
        values[i] = objective(grid[i]);
    }
    const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
    double a = grid[std::max(best - 1, 0)];
    double b = grid[std::min(best + 1, opts.grid - 1)];

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > opts.tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    CalibrationResult r;
    r.gamma = 0.5 * (a + b);
    r.objective = objective(r.gamma);
    if (values[best] < r.objective) {
        r.gamma = grid[best];
        r.objective = values[best];
    }
    r.v_target = v_target;
    r.v_model = v_model(r.gamma);
    r.bound_hit = r.gamma - opts.lower <= opts.tol || opts.upper - r.gamma <= opts.tol;
    return r;
}

CalibrationResult calibrate_gamma(const FarimaSpec& truth, const MixedParams& tmpl, long window,
                                  long horizon, const CalibrationOptions& opts) {
    truth.validate();
    tmpl.validate();
    const long lags = window + horizon - 1;
    const double target = conditional_variance(acvf_sowell(truth, lags), window, horizon);
    auto model = [&](double gamma) {
        MixedParams p = tmpl;
        p.fou2.gamma = gamma;
        return conditional_variance(mixed_acvf_sequence(p, lags), window, horizon);
    };
    return calibrate_gamma(target, model, opts);
}

namespace {

struct SeedOutcome {
    std::vector<long> violations;
    std::vector<std::vector<BacktestRecord>> records;
};

SeedOutcome run_seed(const BacktestConfig& cfg, const AcvfSequence& truth_acvf,
                     const std::vector<Predictor>& predictors, const std::vector<double>& means,
                     std::uint64_t seed) {
    SimConfig sim{cfg.path_length(), seed, 0, cfg.method};
    Eigen::VectorXd path = sample_path(truth_acvf, sim);
    path.array() += cfg.truth.mu;

    const double prev = 1.0;
    const double multiplier = cfg.eta + 1.0;
    SeedOutcome out;
    out.violations.assign(predictors.size(), 0);
    out.records.resize(predictors.size());
    for (std::size_t f = 0; f < predictors.size(); ++f) {
        const Predictor& pred = predictors[f];
        if (cfg.keep_records) out.records[f].reserve(cfg.steps);
        for (long t = 0; t < cfg.steps; ++t) {
            const std::span<const double> window(path.data() + t, cfg.window);
            const double realized = path(t + cfg.window + cfg.horizon - 1);
            const ForecastResult fc = pred(window, means[f]);
            const RiskReport risk = risk_report(fc.mean, fc.variance, cfg.alpha, cfg.eta, prev);
            const double threshold = cfg.mode == ViolationMode::es ? risk.es_value : risk.var_value;
            const bool violated = multiplier * realized * prev < threshold;
            if (violated) ++out.violations[f];
            if (cfg.keep_records)
                out.records[f].push_back(
                    {seed, t, fc.mean, fc.variance, risk.var_value, risk.es_value, realized, violated});
        }
    }
    return out;
}

}  // namespace

std::map<std::string, BacktestResult> run_backtest(const BacktestConfig& cfg) {
    cfg.validate();
    const long lags = cfg.window + cfg.horizon - 1;
    const AcvfSequence truth_acvf = acvf_sowell(cfg.truth, cfg.path_length() - 1);

    const std::size_t nf = cfg.forecasters.size();
    std::vector<Predictor> predictors;
    std::vector<double> means;
    std::vector<CalibrationResult> calibrations(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        ProcessSpec spec = cfg.forecasters[f].process;
        if (cfg.forecasters[f].calibrate) {
            auto& mixed = std::get<MixedParams>(spec);
            calibrations[f] = calibrate_gamma(cfg.truth, mixed, cfg.window, cfg.horizon);
            mixed.fou2.gamma = calibrations[f].gamma;
        }
        predictors.emplace_back(process_acvf(spec, lags), cfg.window, cfg.horizon);
        // Forecasters other than FARIMA carry no mean; they forecast about the truth's.
        means.push_back(std::holds_alternative<FarimaSpec>(spec) ? process_mean(spec) : cfg.truth.mu);
    }

    const std::size_t ns = cfg.seeds.size();
    std::vector<SeedOutcome> outcomes(ns);
    std::vector<std::exception_ptr> errors(ns);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ns; i = next++) {
            try {
                outcomes[i] = run_seed(cfg, truth_acvf, predictors, means, cfg.seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nthreads = static_cast<int>(std::min<std::size_t>(cfg.threads, ns));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < ns; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw BreakdownError("backtest: seed " + std::to_string(cfg.seeds[i]) + ": " + e.what());
        }
    }

    const double per_seed_expected = cfg.alpha * static_cast<double>(cfg.steps);
    std::map<std::string, BacktestResult> results;
    for (std::size_t f = 0; f < nf; ++f) {
        BacktestResult r;
        r.expected_violations = per_seed_expected * static_cast<double>(ns);
        for (std::size_t i = 0; i < ns; ++i) {
            r.violations += outcomes[i].violations[f];
            r.seed_ratios.push_back(violation_ratio(outcomes[i].violations[f], per_seed_expected));
            if (cfg.keep_records)
                r.records.insert(r.records.end(), outcomes[i].records[f].begin(),
                                 outcomes[i].records[f].end());
        }
        r.ratio = violation_ratio(r.violations, r.expected_violations);
        if (ns > 1) {
            double mean = 0.0;
            for (double x : r.seed_ratios) mean += x;
            mean /= static_cast<double>(ns);
            double ss = 0.0;
            for (double x : r.seed_ratios) ss += (x - mean) * (x - mean);
            r.ratio_volatility = std::sqrt(ss / static_cast<double>(ns - 1));
        }
        r.calibrated = cfg.forecasters[f].calibrate;
        r.calibration = calibrations[f];
        results.emplace(cfg.forecasters[f].name, std::move(r));
    }
    return results;
}

void write_backtest_records_csv(std::ostream& out, const std::map<std::string, BacktestResult>& results) {
    out << "forecaster,seed,step,mean,variance,var,es,realized,violation\n";
    for (const auto& [name, r] : results)
        for (const auto& rec : r.records)
            out << name << ',' << rec.seed << ',' << rec.step << ',' << format_real(rec.mean) << ','
                << format_real(rec.variance) << ',' << format_real(rec.var) << ','
                << format_real(rec.es) << ',' << format_real(rec.realized) << ','
                << (rec.violated ? 1 : 0) << '\n';
}

void write_backtest_summary_csv(std::ostream& out, const std::map<std::string, BacktestResult>& results) {
    out << "forecaster,ratio,ratio_volatility\n";
    for (const auto& [name, r] : results)
        out << name << ',' << format_real(r.ratio) << ',' << format_real(r.ratio_volatility) << '\n';
}

}  // namespace mfgn
