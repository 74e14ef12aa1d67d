#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include <mfgn/errors.hpp>

namespace mfgn::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

/// Allowed interval for a numeric field; bounds are open unless marked closed.
struct Range {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false;

    bool ok(double x) const { return (lo_closed ? x >= lo : x > lo) && x < hi; }
    std::string describe() const {
        if (std::isinf(hi)) return std::string(lo_closed ? "be at least " : "exceed ") + format_real(lo);
        return "lie in (" + format_real(lo) + ", " + format_real(hi) + ")";
    }
};

const Range kPositive{0.0};
const Range kNonNegative{0.0, std::numeric_limits<double>::infinity(), true};
const Range kHurst{0.0, 1.0};
const Range kHurstLong{0.5, 1.0};

/// Object reader that records which keys were consumed.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string path(const std::string& key) const { return join(path_, key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    template <class T>
    void read(const std::string& key, T& out) {
        if (!has(key)) return;
        try {
            out = raw(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path(key) + ": wrong type");
        }
    }

    void read_long(const std::string& key, long& out, long min = std::numeric_limits<long>::min()) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
        out = v.get<long>();
        if (out < min) throw ConfigError(path(key) + ": must be at least " + std::to_string(min));
    }

    void read_u64(const std::string& key, std::uint64_t& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number_unsigned()) throw ConfigError(path(key) + ": expected a non-negative integer");
        out = v.get<std::uint64_t>();
    }

    void read_double(const std::string& key, double& out, const Range& range = {}) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
        out = v.get<double>();
        if (!range.ok(out)) throw ConfigError(path(key) + ": must " + range.describe());
    }

    void read_doubles(const std::string& key, std::vector<double>& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(path(key) + ": expected an array of numbers");
        out.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(path(key) + "[" + std::to_string(i) + "]: expected a number");
            out.push_back(v[i].get<double>());
        }
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw ConfigError("unknown key '" + join(path_, key) + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + msg);
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

/// Runs a module validator and re-labels its error with the config key.
void checked(const std::string& path, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

SimMethod parse_method(const std::string& path, const std::string& s) {
    if (s == "circulant") return SimMethod::circulant;
    if (s == "cholesky") return SimMethod::cholesky;
    throw ConfigError(path + ": expected \"circulant\" or \"cholesky\"");
}

FarimaSpec parse_farima_fields(Section& s) {
    FarimaSpec f;
    s.read_double("d", f.d, Range{-0.5, 0.5});
    s.read_doubles("ar", f.ar);
    s.read_doubles("ma", f.ma);
    s.read_double("sigma2_eps", f.sigma2_eps, kPositive);
    s.read_double("mu", f.mu);
    // what is left for the validator is AR stationarity
    checked(s.path("ar"), [&] { f.validate(); });
    return f;
}

ProcessSpec parse_process(const json& j, const std::string& path) {
    Section s(j, path);
    if (!s.has("kind")) s.fail("missing key 'kind'");
    std::string kind;
    s.read("kind", kind);
    ProcessSpec spec;
    if (kind == "fgn") {
        FgnParams p;
        s.read_double("hurst", p.hurst, kHurst);
        s.read_double("sigma2", p.sigma2, kPositive);
        spec = p;
    } else if (kind == "fou2") {
        Fou2Spec p;
        s.read_double("hurst", p.params.hurst, kHurstLong);
        s.read_double("gamma", p.params.gamma, kPositive);
        s.read_double("dt", p.params.dt, kPositive);
        s.read("increments", p.increments);
        spec = p;
    } else if (kind == "farima") {
        spec = parse_farima_fields(s);
    } else if (kind == "mixed") {
        double sigma2_bm = 1.0, hurst_fgn = 0.7, gamma = 0.3, horizon_T = 1.0;
        long grid_n = 1024;
        s.read_double("sigma2_bm", sigma2_bm, kNonNegative);
        s.read_double("hurst_fgn", hurst_fgn, kHurstLong);
        double hurst_fou2 = hurst_fgn;
        s.read_double("hurst_fou2", hurst_fou2, kHurstLong);
        s.read_double("gamma", gamma, kPositive);
        s.read_double("horizon_T", horizon_T, kPositive);
        s.read_long("grid_n", grid_n, 1);
        s.finish();
        MixedParams p;
        checked(path, [&] { p = MixedParams::make(sigma2_bm, hurst_fgn, hurst_fou2, gamma, horizon_T, grid_n); });
        return p;
    } else {
        throw ConfigError(s.path("kind") + ": expected one of fgn, fou2, farima, mixed");
    }
    s.finish();
    checked(path, [&] { validate(spec); });
    return spec;
}

void parse_backtest(const json& j, BacktestConfig& b) {
    const std::string path = "backtest";
    Section s(j, path);
    if (s.has("truth")) {
        Section t(s.raw("truth"), s.path("truth"));
        if (t.has("kind")) {
            std::string kind;
            t.read("kind", kind);
            if (kind != "farima") throw ConfigError(t.path("kind") + ": the truth must be \"farima\"");
        }
        b.truth = parse_farima_fields(t);
        t.finish();
    }
    if (s.has("forecasters")) {
        const json& arr = s.raw("forecasters");
        if (!arr.is_array()) throw ConfigError(s.path("forecasters") + ": expected an array");
        b.forecasters.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string fpath = s.path("forecasters") + "[" + std::to_string(i) + "]";
            Section f(arr[i], fpath);
            NamedForecaster nf;
            f.read("name", nf.name);
            if (!f.has("process")) f.fail("missing key 'process'");
            nf.process = parse_process(f.raw("process"), f.path("process"));
            f.read("calibrate", nf.calibrate);
            f.finish();
            b.forecasters.push_back(std::move(nf));
        }
    }
    s.read_long("window", b.window, 1);
    s.read_long("horizon", b.horizon, 1);
    s.read_double("alpha", b.alpha, Range{0.0, 1.0});
    s.read_long("steps", b.steps, 1);
    if (s.has("seeds")) {
        const json& arr = s.raw("seeds");
        if (!arr.is_array()) throw ConfigError(s.path("seeds") + ": expected an array");
        b.seeds.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number_unsigned())
                throw ConfigError(s.path("seeds") + "[" + std::to_string(i) + "]: expected a non-negative integer");
            b.seeds.push_back(arr[i].get<std::uint64_t>());
        }
        if (b.seeds.empty()) throw ConfigError(s.path("seeds") + ": at least one seed is required");
    }
    s.read_double("eta", b.eta, Range{-1.0, std::numeric_limits<double>::infinity(), true});
    if (s.has("violation")) {
        std::string v;
        s.read("violation", v);
        if (v == "es") b.mode = ViolationMode::es;
        else if (v == "var") b.mode = ViolationMode::var;
        else throw ConfigError(s.path("violation") + ": expected \"es\" or \"var\"");
    }
    if (s.has("method")) {
        std::string m;
        s.read("method", m);
        b.method = parse_method(s.path("method"), m);
    }
    s.read("records", b.keep_records);
    s.finish();
}

void validate_config(const RunConfig& c) {
    if (c.acvf.max_lag < 0) throw ConfigError("acvf.max_lag: must be non-negative");
    checked("simulate.method", [&] { SimConfig{c.simulate.n, c.simulate.seed, c.simulate.stream, c.simulate.method}.validate(); });
    if (c.forecast.horizon < 1) throw ConfigError("forecast.horizon: must be positive");
    for (std::size_t i = 0; i < c.risk.alpha.size(); ++i)
        if (!(c.risk.alpha[i] > 0.0 && c.risk.alpha[i] < 1.0))
            throw ConfigError("risk.alpha[" + std::to_string(i) + "]: must lie in (0, 1)");
    if (c.risk.alpha.empty()) throw ConfigError("risk.alpha: at least one level is required");
    if (c.risk.eta < -1.0) throw ConfigError("risk.eta: must be at least -1");
    if (!(c.risk.prev > 0.0)) throw ConfigError("risk.prev: must be positive");
    if (c.risk.variance && !(*c.risk.variance > 0.0)) throw ConfigError("risk.variance: must be positive");
    if (c.risk.mean.has_value() != c.risk.variance.has_value())
        throw ConfigError("risk.mean: mean and variance must be given together");
    if (c.calibrate.window < 1) throw ConfigError("calibrate.window: must be positive");
    if (c.calibrate.horizon < 1) throw ConfigError("calibrate.horizon: must be positive");
    const auto& o = c.calibrate.options;
    if (!(o.lower > 0.0 && o.upper > o.lower)) throw ConfigError("calibrate.lower: need 0 < lower < upper");
    if (!(o.tol > 0.0)) throw ConfigError("calibrate.tol: must be positive");
    if (c.backtest.method == SimMethod::cholesky && c.backtest.path_length() > kCholeskyMaxN)
        throw ConfigError("backtest.method: cholesky is limited to paths of " + std::to_string(kCholeskyMaxN) +
                          " points; window + steps + horizon - 1 is " + std::to_string(c.backtest.path_length()));
    // ranges were checked as keys were read; what remains concerns the forecaster list
    checked("backtest.forecasters", [&] { c.backtest.validate(); });
}

std::string position(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

RunConfig default_config() {
    RunConfig c;
    FarimaSpec truth;
    truth.d = 0.3;
    truth.ar = {0.5};
    truth.ma = {0.2};
    c.backtest.truth = truth;
    const double variance = acvf_sowell(truth, 0).values(0);
    c.backtest.forecasters = {
        {"farima", truth, false},
        {"fgn", FgnParams{0.8, variance}, false},
        {"mixed", MixedParams::make(0.1, 0.8, 0.8, 1.0, 1024.0, 1024), true},
    };
    return c;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("syntax error at " + position(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
    RunConfig c = default_config();
    Section root(doc, "");
    if (root.has("process")) c.process = parse_process(root.raw("process"), "process");
    if (root.has("acvf")) {
        Section s(root.raw("acvf"), "acvf");
        s.read_long("max_lag", c.acvf.max_lag, 0);
        s.finish();
    }
    if (root.has("simulate")) {
        Section s(root.raw("simulate"), "simulate");
        s.read_long("n", c.simulate.n, 2);
        s.read_u64("seed", c.simulate.seed);
        s.read_u64("stream", c.simulate.stream);
        if (s.has("method")) {
            std::string m;
            s.read("method", m);
            c.simulate.method = parse_method(s.path("method"), m);
        }
        s.finish();
    }
    if (root.has("forecast")) {
        Section s(root.raw("forecast"), "forecast");
        s.read_doubles("data", c.forecast.data);
        s.read_long("horizon", c.forecast.horizon, 1);
        s.finish();
    }
    if (root.has("risk")) {
        Section s(root.raw("risk"), "risk");
        s.read_doubles("alpha", c.risk.alpha);
        s.read_double("eta", c.risk.eta, Range{-1.0, std::numeric_limits<double>::infinity(), true});
        s.read_double("prev", c.risk.prev, kPositive);
        if (s.has("mean")) s.read_double("mean", c.risk.mean.emplace());
        if (s.has("variance")) s.read_double("variance", c.risk.variance.emplace(), kPositive);
        s.finish();
    }
    if (root.has("calibrate")) {
        Section s(root.raw("calibrate"), "calibrate");
        s.read_long("window", c.calibrate.window, 1);
        s.read_long("horizon", c.calibrate.horizon, 1);
        s.read_double("lower", c.calibrate.options.lower, kPositive);
        s.read_double("upper", c.calibrate.options.upper, kPositive);
        s.read_double("tol", c.calibrate.options.tol, kPositive);
        s.finish();
    }
    if (root.has("backtest")) parse_backtest(root.raw("backtest"), c.backtest);
    root.read("output", c.output);
    root.finish();
    validate_config(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace mfgn::cli
