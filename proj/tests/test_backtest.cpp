#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <mfgn/backtest.hpp>
#include <mfgn/errors.hpp>

using namespace mfgn;

namespace {

FarimaSpec truth_spec() {
    FarimaSpec t;
    t.ar = {0.5};
    t.d = 0.3;
    t.ma = {0.2};
    return t;
}

FarimaSpec white(double sigma2) {
    FarimaSpec w;
    w.sigma2_eps = sigma2;
    return w;
}

BacktestConfig small_config() {
    BacktestConfig cfg;
    cfg.truth = truth_spec();
    cfg.forecasters = {{"farima", truth_spec()},
                       {"fgn", FgnParams{0.8, 2.157}},
                       {"mixed", MixedParams::make(0.1, 0.8, 0.8, 1.0, 128.0, 128), true}};
    cfg.window = 128;
    cfg.steps = 200;
    cfg.seeds = {1, 2, 3, 4};
    return cfg;
}

bool same(const BacktestResult& a, const BacktestResult& b) {
    if (a.violations != b.violations || a.ratio != b.ratio || a.ratio_volatility != b.ratio_volatility ||
        a.seed_ratios != b.seed_ratios || a.records.size() != b.records.size())
        return false;
    for (size_t i = 0; i < a.records.size(); ++i) {
        const auto &x = a.records[i], &y = b.records[i];
        if (x.seed != y.seed || x.step != y.step || x.mean != y.mean || x.variance != y.variance ||
            x.var != y.var || x.es != y.es || x.realized != y.realized || x.violated != y.violated)
            return false;
    }
    return true;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("violation ratio") {
    CHECK(violation_ratio(0, 50.0) == 0.0);
    CHECK(violation_ratio(50, 50.0) == 1.0);
    CHECK(violation_ratio(180, 50.0) == 3.6);
    CHECK_THROWS_AS(violation_ratio(1, 0.0), DomainError);
    CHECK_THROWS_AS(violation_ratio(-1, 5.0), DomainError);
}

TEST_CASE("white noise truth and forecaster land in the binomial band") {
    BacktestConfig cfg;
    cfg.truth = white(1.0);
    cfg.forecasters = {{"white", white(1.0)}};
    cfg.window = 32;
    cfg.steps = 10000;
    cfg.seeds = {7};
    cfg.mode = ViolationMode::var;
    cfg.keep_records = false;
    const BacktestResult r = run_backtest(cfg).at("white");
    const double expected = cfg.alpha * cfg.steps;
    CHECK(r.expected_violations == expected);
    const double sd = std::sqrt(cfg.steps * cfg.alpha * (1 - cfg.alpha)) / expected;
    CHECK(std::abs(r.ratio - 1.0) <= 4 * sd);
    CHECK(r.records.empty());
}

TEST_CASE("no violations gives a zero ratio") {
    BacktestConfig cfg;
    cfg.truth = white(1.0);
    cfg.forecasters = {{"white", white(1.0)}};
    cfg.window = 8;
    cfg.steps = 20;
    cfg.alpha = 1e-12;
    cfg.seeds = {1, 2};
    const BacktestResult r = run_backtest(cfg).at("white");
    CHECK(r.violations == 0);
    CHECK(r.ratio == 0.0);
    CHECK(r.ratio_volatility == 0.0);
}

TEST_CASE("records are consistent with the summary") {
    const auto results = run_backtest(small_config());
    REQUIRE(results.size() == 3);
    for (const auto& [name, r] : results) {
        CAPTURE(name);
        CHECK(r.records.size() == 200 * 4);
        const long count = std::count_if(r.records.begin(), r.records.end(), [](const auto& x) { return x.violated; });
        CHECK(count == r.violations);
        CHECK(r.expected_violations == 0.05 * 200 * 4);
        CHECK(r.ratio == r.violations / r.expected_violations);
        REQUIRE(r.seed_ratios.size() == 4);
        double mean = 0;
        for (double s : r.seed_ratios) mean += s / 4;
        CHECK(mean == doctest::Approx(r.ratio).epsilon(1e-14));
        double ss = 0;
        for (double s : r.seed_ratios) ss += (s - mean) * (s - mean);
        CHECK(r.ratio_volatility == doctest::Approx(std::sqrt(ss / 3)).epsilon(1e-12));
        for (const auto& x : r.records) {
            REQUIRE(x.variance > 0.0);
            REQUIRE(x.es <= x.var);
            REQUIRE(x.violated == (x.realized < x.es));
        }
    }
    CHECK(results.at("mixed").calibrated);
    CHECK(!results.at("farima").calibrated);
    CHECK(results.at("mixed").calibration.gamma > 0.0);
}

TEST_CASE("forecaster order and thread count do not change results") {
    BacktestConfig a = small_config();
    BacktestConfig b = a;
    std::reverse(b.forecasters.begin(), b.forecasters.end());
    b.threads = 3;
    const auto ra = run_backtest(a), rb = run_backtest(b);
    for (const auto& [name, r] : ra) {
        CAPTURE(name);
        CHECK(same(r, rb.at(name)));
    }
    // Dropping a forecaster leaves the others untouched.
    BacktestConfig c = a;
    c.forecasters.erase(c.forecasters.begin() + 1);
    const auto rc = run_backtest(c);
    CHECK(same(rc.at("farima"), ra.at("farima")));
    CHECK(same(rc.at("mixed"), ra.at("mixed")));
}

TEST_CASE("truth-matched forecaster beats a misspecified one") {
    int wins = 0;
    for (std::uint64_t batch = 0; batch < 10; ++batch) {
        BacktestConfig cfg;
        cfg.truth = truth_spec();
        cfg.forecasters = {{"truth", truth_spec()}, {"naive", white(1.0)}};
        cfg.window = 128;
        cfg.steps = 400;
        cfg.seeds = {100 + 2 * batch, 101 + 2 * batch};
        cfg.mode = ViolationMode::var;
        cfg.keep_records = false;
        const auto r = run_backtest(cfg);
        wins += std::abs(r.at("truth").ratio - 1) < std::abs(r.at("naive").ratio - 1);
    }
    CHECK(wins >= 9);
}

TEST_CASE("ratio volatility shrinks as steps quadruple") {
    auto run = [](long steps, std::uint64_t offset) {
        BacktestConfig cfg;
        cfg.truth = white(1.0);
        cfg.forecasters = {{"white", white(1.0)}};
        cfg.window = 16;
        cfg.steps = steps;
        cfg.mode = ViolationMode::var;
        cfg.keep_records = false;
        cfg.seeds.clear();
        for (std::uint64_t s = 0; s < 8; ++s) cfg.seeds.push_back(offset + s);
        return run_backtest(cfg).at("white").ratio_volatility;
    };
    std::vector<double> short_runs, long_runs;
    for (std::uint64_t rep = 0; rep < 7; ++rep) {
        short_runs.push_back(run(500, 1000 + 8 * rep));
        long_runs.push_back(run(2000, 5000 + 8 * rep));
    }
    for (double v : short_runs) CHECK(v >= 0.0);
    CHECK(median(long_runs) < median(short_runs));
}

TEST_CASE("calibration on a grid-bracketed objective") {
    const auto v = [](double g) { return 1.0 + 1.0 / (1.0 + g) + 0.05 * std::sin(g); };
    const double target = v(2.7);
    const CalibrationOptions opts;
    const CalibrationResult r = calibrate_gamma(target, v, opts);
    CHECK(!r.bound_hit);
    CHECK(std::abs(r.gamma - 2.7) < 1e-3);
    CHECK(r.objective == doctest::Approx(std::abs(v(r.gamma) - target)));
    CHECK(r.v_target == target);
    CHECK(r.v_model == v(r.gamma));

    // The best grid point and its neighbours bracket the answer.
    std::vector<double> grid(opts.grid);
    for (int i = 0; i < opts.grid; ++i)
        grid[i] = opts.lower * std::pow(opts.upper / opts.lower, double(i) / (opts.grid - 1));
    int best = 0;
    for (int i = 1; i < opts.grid; ++i)
        if (std::abs(v(grid[i]) - target) < std::abs(v(grid[best]) - target)) best = i;
    CHECK(r.gamma >= grid[std::max(best - 1, 0)]);
    CHECK(r.gamma <= grid[std::min(best + 1, opts.grid - 1)]);
    CHECK(r.objective <= std::abs(v(grid[best]) - target));

    // Homogeneous rescaling of target and model leaves γ unchanged.
    const CalibrationResult s = calibrate_gamma(7.5 * target, [&](double g) { return 7.5 * v(g); }, opts);
    CHECK(std::abs(s.gamma - r.gamma) < 1e-4);

    // A target out of reach of a decreasing model pins the search to the upper bound.
    const CalibrationResult hit = calibrate_gamma(0.5, [](double g) { return 1.0 + 1.0 / g; }, opts);
    CHECK(hit.bound_hit);
    CHECK(hit.gamma == doctest::Approx(opts.upper).epsilon(1e-4));
}

TEST_CASE("calibration against a FARIMA truth") {
    FarimaSpec fn;
    fn.d = 0.3;
    const MixedParams tmpl = MixedParams::make(0.0, 0.8, 0.8, 1.0, 1024.0, 1024);
    const CalibrationResult r = calibrate_gamma(fn, tmpl, 512, 1);
    CHECK(!r.bound_hit);
    CHECK(r.objective < 1e-3 * r.v_target);
    CHECK(r.v_target == doctest::Approx(conditional_variance(acvf_sowell(fn, 512), 512, 1)));
    MixedParams at = tmpl;
    at.fou2.gamma = r.gamma;
    CHECK(r.v_model == doctest::Approx(conditional_variance(mixed_acvf_sequence(at, 512), 512, 1)));

    const CalibrationResult again = calibrate_gamma(fn, tmpl, 512, 1);
    CHECK(again.gamma == r.gamma);
}

TEST_CASE("config validation") {
    BacktestConfig cfg = small_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = small_config();
    cfg.seeds.clear();
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = small_config();
    cfg.forecasters.push_back(cfg.forecasters.front());
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = small_config();
    cfg.forecasters[0].calibrate = true;  // only mixed forecasters calibrate
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    CHECK(BacktestConfig::default_seeds().size() == 16);
}

TEST_CASE("csv writers") {
    BacktestConfig cfg = small_config();
    cfg.steps = 3;
    cfg.seeds = {1};
    const auto r = run_backtest(cfg);
    std::ostringstream rec, sum;
    write_backtest_records_csv(rec, r);
    write_backtest_summary_csv(sum, r);
    const std::string records = rec.str(), summary = sum.str();
    CHECK(records.rfind("forecaster,seed,step,mean,variance,var,es,realized,violation\n", 0) == 0);
    CHECK(std::count(records.begin(), records.end(), '\n') == 1 + 3 * 3);
    CHECK(summary.rfind("forecaster,ratio,ratio_volatility\nfarima,", 0) == 0);
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);
}
