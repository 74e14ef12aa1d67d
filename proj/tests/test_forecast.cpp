#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <mfgn/errors.hpp>
#include <mfgn/farima.hpp>
#include <mfgn/forecast.hpp>
#include <mfgn/kernels.hpp>

using namespace mfgn;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Kernel {
    std::string name;
    AcvfSequence acvf;
};

std::vector<Kernel> kernels(long max_lag) {
    FarimaSpec farima;
    farima.ar = {0.5};
    farima.d = 0.3;
    farima.ma = {0.2};
    return {
        {"fgn", fgn_acvf_sequence({0.7, 1.0}, max_lag)},
        {"fou2", fou2_increment_acvf_sequence({0.75, 0.3, 1.0}, max_lag)},
        {"farima", acvf_sowell(farima, max_lag)},
        {"mixed", mixed_acvf_sequence(MixedParams::make(0.3, 0.8, 0.8, 1.0, 512.0, 512), max_lag)},
    };
}

std::vector<double> test_data(long n) {
    std::vector<double> x(n);
    for (long i = 0; i < n; ++i) x[i] = std::sin(0.37 * i) + 0.5 * std::cos(1.91 * i + 0.3) + 0.01 * i;
    return x;
}

AcvfSequence ar1_acvf(double phi, double sigma2, long max_lag) {
    Eigen::VectorXd v(max_lag + 1);
    for (long k = 0; k <= max_lag; ++k) v(k) = sigma2 * std::pow(phi, k) / (1 - phi * phi);
    return {1.0, v};
}

}  // namespace

TEST_CASE("Levinson matches a dense Toeplitz solve on every kernel family") {
    for (long n : {1L, 2L, 17L, 128L, 512L}) {
        for (const auto& kern : kernels(n + 3)) {
            CAPTURE(kern.name);
            CAPTURE(n);
            const Eigen::MatrixXd gamma = toeplitz(kern.acvf.values, n);
            const Eigen::LLT<Eigen::MatrixXd> llt(gamma);
            REQUIRE(llt.info() == Eigen::Success);
            const std::vector<double> data = test_data(n);
            const Eigen::Map<const Eigen::VectorXd> x(data.data(), n);
            const double mu = 0.25;
            for (long k : {1L, 4L}) {
                Eigen::VectorXd g(n);
                for (long i = 0; i < n; ++i) g(i) = kern.acvf.values(n + k - 1 - i);
                const Eigen::VectorXd w = llt.solve(g);
                const double mean = mu + w.dot(x.array().matrix() - Eigen::VectorXd::Constant(n, mu));
                const double var = kern.acvf.values(0) - g.dot(w);

                const Predictor pred(kern.acvf, n, k);
                CHECK((pred.weights() - w).norm() <= 1e-10 * w.norm());
                const ForecastResult r = pred(data, mu);
                CHECK(std::abs(r.mean - mean) <= 1e-10 * std::max(1.0, std::abs(mean)));
                CHECK(std::abs(r.variance - var) <= 1e-10 * kern.acvf.values(0));
                CHECK(r.horizon == k);
                CHECK(r.window == n);

                const ForecastResult once = predict(kern.acvf, data, mu, k);
                CHECK(once.mean == r.mean);
                CHECK(once.variance == r.variance);
            }
        }
    }
}

TEST_CASE("durbin-levinson coefficients") {
    const AcvfSequence ar1 = ar1_acvf(0.6, 1.3, 8);
    const DurbinLevinson<double> dl = durbin_levinson_coeffs(ar1, 4);
    CHECK(rel(dl.coefficients(0), 0.6) < 1e-14);
    for (int j = 1; j < 4; ++j) CHECK(std::abs(dl.coefficients(j)) < 1e-14);
    const Eigen::VectorXd direct = toeplitz(ar1.values, 4).ldlt().solve(ar1.values.segment(1, 4));
    CHECK((dl.coefficients - direct).norm() < 1e-12);

    const AcvfSequence white{1.0, (Eigen::VectorXd(6) << 2.0, 0, 0, 0, 0, 0).finished()};
    CHECK(durbin_levinson_coeffs(white, 5).coefficients.cwiseAbs().maxCoeff() == 0.0);

    // Random PSD acvf: autocovariance of a random MA(12) filter.
    Eigen::VectorXd b(13);
    for (int i = 0; i < 13; ++i) b(i) = std::sin(3.1 * i + 1.0) + 0.1;
    Eigen::VectorXd acvf = Eigen::VectorXd::Zero(65);
    for (int k = 0; k <= 12; ++k)
        for (int i = 0; i + k <= 12; ++i) acvf(k) += b(i) * b(i + k);
    const AcvfSequence ma{1.0, acvf};
    const DurbinLevinson<double> dl64 = durbin_levinson_coeffs(ma, 64);
    const Eigen::VectorXd dense = toeplitz(acvf, 64).llt().solve(acvf.segment(1, 64));
    CHECK((dl64.coefficients - dense).norm() <= 1e-10 * dense.norm());
    for (int m = 1; m <= 64; ++m) {
        CHECK(dl64.innovation_variances(m) > 0.0);
        CHECK(dl64.innovation_variances(m) <= dl64.innovation_variances(m - 1));
    }
}

TEST_CASE("white noise forecast") {
    const AcvfSequence white{1.0, (Eigen::VectorXd(8) << 1.7, 0, 0, 0, 0, 0, 0, 0).finished()};
    const std::vector<double> data = test_data(5);
    for (long k = 1; k <= 3; ++k) {
        const ForecastResult r = predict(white, data, -0.4, k);
        CHECK(r.mean == -0.4);
        CHECK(r.variance == 1.7);
    }
}

TEST_CASE("AR(1) forecasts") {
    const double phi = 0.7, sigma2 = 0.9, mu = 1.5;
    const AcvfSequence acvf = ar1_acvf(phi, sigma2, 40);
    const std::vector<double> data = test_data(30);
    const double last = data.back();

    const ForecastResult one = predict(acvf, data, mu, 1);
    CHECK(rel(one.mean - mu, phi * (last - mu)) < 1e-12);
    CHECK(rel(one.variance, sigma2) < 1e-12);

    const ForecastResult three = predict(acvf, data, mu, 3);
    CHECK(rel(three.mean - mu, std::pow(phi, 3) * (last - mu)) < 1e-12);
    CHECK(rel(three.variance, sigma2 * (1 + phi * phi + std::pow(phi, 4))) < 1e-12);
}

TEST_CASE("shift and scale") {
    for (const auto& kern : kernels(70)) {
        CAPTURE(kern.name);
        const std::vector<double> data = test_data(64);
        const ForecastResult base = predict(kern.acvf, data, 0.2, 2);

        std::vector<double> shifted = data;
        for (double& v : shifted) v += 3.0;
        const ForecastResult s = predict(kern.acvf, shifted, 3.2, 2);
        CHECK(std::abs(s.mean - (base.mean + 3.0)) < 1e-12);
        CHECK(s.variance == base.variance);

        const double c = 2.5;
        std::vector<double> scaled = data;
        for (double& v : scaled) v *= c;
        const AcvfSequence acvf2{kern.acvf.dt, kern.acvf.values * (c * c)};
        const ForecastResult t = predict(acvf2, scaled, 0.2 * c, 2);
        CHECK(rel(t.mean - 0.2 * c, c * (base.mean - 0.2)) < 1e-10);
        CHECK(rel(t.variance, c * c * base.variance) < 1e-12);
    }
}

TEST_CASE("variance is bounded and nondecreasing in the horizon") {
    for (const auto& kern : kernels(300)) {
        CAPTURE(kern.name);
        double prev = 0.0;
        for (long k = 1; k <= 40; ++k) {
            const Predictor p(kern.acvf, 256, k);
            CHECK(p.variance() >= prev - 1e-14 * kern.acvf.values(0));
            CHECK(p.variance() >= 0.0);
            CHECK(p.variance() <= kern.acvf.values(0) + 1e-12);
            prev = p.variance();
        }
    }
}

TEST_CASE("errors") {
    const AcvfSequence acvf = ar1_acvf(0.5, 1.0, 10);
    const std::vector<double> data = test_data(10);
    CHECK_THROWS_AS(predict(acvf, data, 0.0, 2), DomainError);
    CHECK_THROWS_AS(predict(acvf, data, 0.0, 0), DomainError);
    CHECK_THROWS_AS(Predictor(acvf, 0, 1), DomainError);
    const Predictor p(acvf, 4, 1);
    CHECK_THROWS_AS(p(data, 0.0), DomainError);

    // Perfectly correlated series: the first innovation variance is already 0.
    const AcvfSequence flat{1.0, Eigen::VectorXd::Constant(6, 1.0)};
    try {
        durbin_levinson_coeffs(flat, 4);
        FAIL("expected breakdown");
    } catch (const BreakdownError& e) {
        CHECK(std::string(e.what()).find("order 1") != std::string::npos);
    }
    CHECK_THROWS_AS(predict(flat, std::vector<double>(4, 1.0), 0.0, 1), BreakdownError);
}
