#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include <mfgn/errors.hpp>
#include <mfgn/farima.hpp>
#include <mfgn/specfun.hpp>

using namespace mfgn;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

FarimaSpec make(std::vector<double> ar, double d, std::vector<double> ma) {
    FarimaSpec s;
    s.ar = std::move(ar);
    s.d = d;
    s.ma = std::move(ma);
    return s;
}

struct MatrixCase {
    const char* name;
    FarimaSpec spec;
    // mpmath spectral integrals at lags 0, 1, 5
    double g0, g1, g5;
};

std::vector<MatrixCase> matrix() {
    return {
        {"(1,0.3,1)", make({0.5}, 0.3, {0.2}), 2.1570298296901678909, 1.5528511645769343373, 0.0},
        {"(2,0.2,0)", make({0.5, -0.3}, 0.2, {}), 1.5727084458575667561, 0.86215822070858811033,
         0.18022367940702189002},
        {"(1,-0.2,2)", make({0.6}, -0.2, {0.3, -0.2}), 1.0847473894929951303, 0.15432433408695181876,
         -0.023815897161285039551},
        {"(0,0.45,1)", make({}, 0.45, {0.4}), 1.8410826125404820423, 0.8848647228060659804,
         0.91199089133968618299},
    };
}

// Complex series for F(a, 1; c; z), summed until the terms stall.
std::complex<double> f21_series(double a, double c, std::complex<double> z) {
    std::complex<double> term = 1.0, sum = 1.0;
    for (int n = 0; n < 20000; ++n) {
        term *= (a + n) / (c + n) * z;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

TEST_CASE("ma coefficients") {
    const Eigen::VectorXd white = ma_coefficients(make({}, 0.0, {}), 5);
    CHECK(white(0) == 1.0);
    for (int j = 1; j < 5; ++j) CHECK(white(j) == 0.0);

    const Eigen::VectorXd ar1 = ma_coefficients(make({0.5}, 0.0, {}), 10);
    for (int j = 0; j < 10; ++j) CHECK(rel(ar1(j), std::pow(0.5, j)) < 1e-15);

    const double d = 0.3;
    const Eigen::VectorXd fn = ma_coefficients(make({}, d, {}), 200);
    double psi = 1.0;
    for (int j = 1; j < 200; ++j) {
        psi *= (j - 1 + d) / j;
        CHECK(rel(fn(j), psi) < 1e-13);
    }
    CHECK(rel(fn(150), boost::math::tgamma_ratio(150 + d, 151.0) / boost::math::tgamma(d)) < 1e-12);

    // MA part with the minus convention: (1 - θL) applied to the AR(1) response.
    const Eigen::VectorXd arma = ma_coefficients(make({0.5}, 0.0, {0.2}), 6);
    CHECK(rel(arma(1), 0.5 - 0.2) < 1e-15);
    for (int j = 2; j < 6; ++j) CHECK(rel(arma(j), std::pow(0.5, j) - 0.2 * std::pow(0.5, j - 1)) < 1e-14);

    CHECK_THROWS_AS(ma_coefficients(make({1.1}, 0.0, {}), 4), DomainError);
}

TEST_CASE("spec validation") {
    CHECK_NOTHROW(make({0.5}, 0.3, {0.2}).validate());
    CHECK_THROWS_AS(make({}, 0.5, {}).validate(), DomainError);
    CHECK_THROWS_AS(make({}, -0.5, {}).validate(), DomainError);
    CHECK_THROWS_AS(make({1.0}, 0.0, {}).validate(), DomainError);
    CHECK_THROWS_AS(make({0.5, 0.6}, 0.0, {}).validate(), DomainError);
    FarimaSpec s = make({}, 0.1, {});
    s.sigma2_eps = 0.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("ar roots") {
    const Eigen::VectorXcd r1 = ar_roots({0.5});
    REQUIRE(r1.size() == 1);
    CHECK(std::abs(r1(0) - 0.5) < 1e-15);

    const std::vector<double> phi{1.2, -0.72};
    const Eigen::VectorXcd r2 = ar_roots(phi);
    REQUIRE(r2.size() == 2);
    CHECK(r2(0).imag() < 0.0);
    CHECK(std::abs(r2(0) - std::conj(r2(1))) < 1e-14);
    for (int j = 0; j < 2; ++j) {
        const std::complex<double> z = 1.0 / r2(j);
        CHECK(std::abs(1.0 - phi[0] * z - phi[1] * z * z) <= 1e-10);
        CHECK(std::abs(r2(j)) < 1.0);
    }

    // roots -> coefficients -> roots
    const std::vector<double> phi3{0.4, 0.25, -0.1};
    const Eigen::VectorXcd r3 = ar_roots(phi3);
    std::vector<std::complex<double>> poly{1.0};  // Π (1 - ρ L)
    for (int j = 0; j < r3.size(); ++j) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r3(j) * poly[i];
        }
        poly = next;
    }
    std::vector<double> back;
    for (size_t i = 1; i < poly.size(); ++i) {
        CHECK(std::abs(poly[i].imag()) < 1e-12);
        back.push_back(-poly[i].real());
    }
    for (size_t i = 0; i < phi3.size(); ++i) CHECK(std::abs(back[i] - phi3[i]) < 1e-10);
    const Eigen::VectorXcd again = ar_roots(back);
    CHECK((again - r3).cwiseAbs().maxCoeff() < 1e-10);
    const auto g1 = acvf_sowell(make(phi3, 0.2, {0.3}), 20).values;
    const auto g2 = acvf_sowell(make(back, 0.2, {0.3}), 20).values;
    CHECK(((g1 - g2).cwiseAbs().array() / g1.cwiseAbs().array()).maxCoeff() < 1e-10);

    CHECK_THROWS_AS(ar_roots({}), DomainError);
}

TEST_CASE("repeated AR roots are rejected") {
    const FarimaSpec s = make({1.0, -0.25}, 0.2, {});
    CHECK_THROWS_AS(sowell_intermediates(s), DomainError);
    CHECK_THROWS_AS(acvf_sowell(s, 5), DomainError);
}

TEST_CASE("sowell intermediates") {
    const SowellIntermediates w = sowell_intermediates(make({0.5}, 0.3, {0.2, -0.1}));
    // θ₀ = 1, θ₁ = -0.2, θ₂ = 0.1 in Θ(L) = Σ θ_s L^s
    CHECK(rel(w.psi_at(0), 1 + 0.04 + 0.01) < 1e-15);
    CHECK(rel(w.psi_at(1), -0.2 + (-0.2) * 0.1) < 1e-15);
    CHECK(rel(w.psi_at(2), 0.1) < 1e-15);
    for (int k = 1; k <= 2; ++k) CHECK(w.psi_at(k) == w.psi_at(-k));
}

TEST_CASE("sowell C") {
    CHECK(std::abs(sowell_C(0.3, 2, 0.0, 1)) == 0.0);
    CHECK(std::abs(sowell_C(-0.2, -3, 0.0, 2)) == 0.0);

    const double d = 0.3;
    const std::complex<double> rho(0.4, 0.3);
    const double lead = std::exp(std::lgamma(1 - 2 * d) - 2 * std::lgamma(1 - d));
    for (int h : {-3, -1, 0, 1, 2, 4}) {
        for (int p : {1, 2}) {
            const double poch = pochhammer_ratio(d, h);  // (d)_h/(1-d)_h
            const std::complex<double> bracket = std::pow(rho, 2 * p) * f21_series(d + h, 1 - d + h, rho) +
                                                 f21_series(d - h, 1 - d - h, rho) - 1.0;
            const std::complex<double> expect = lead * poch * bracket;
            CAPTURE(h);
            CAPTURE(p);
            CHECK(std::abs(sowell_C(d, h, rho, p) - expect) <= 1e-11 * std::abs(expect));
        }
    }
}

TEST_CASE("three-engine matrix") {
    for (const auto& c : matrix()) {
        CAPTURE(std::string(c.name));
        const AcvfSequence sow = acvf_sowell(c.spec, 50);
        const AcvfSequence spec = acvf_spectral(c.spec, 50);
        const MaTruncatedAcvf ma = acvf_ma_truncated(c.spec, 50);
        for (long k = 0; k <= 50; ++k) {
            CAPTURE(k);
            CHECK(rel(spec.values(k), sow.values(k)) <= 1e-6);
            CHECK(rel(ma.acvf.values(k), sow.values(k)) <= 1e-5);
        }
        CHECK(rel(sow.values(0), c.g0) < 1e-10);
        CHECK(rel(sow.values(1), c.g1) < 1e-10);
        if (c.g5 != 0.0) CHECK(rel(sow.values(5), c.g5) < 1e-9);
        CHECK(is_toeplitz_psd(sow.values));
    }
}

TEST_CASE("frozen FARIMA(1,0.3,1) values") {
    const AcvfSequence g = acvf_sowell(make({0.5}, 0.3, {0.2}), 10);
    CHECK(rel(g.values(0), 2.1570298296901678909) < 1e-12);
    CHECK(rel(g.values(1), 1.5528511645769343373) < 1e-12);
    CHECK(rel(g.values(2), 1.2507313931459948249) < 1e-12);
    CHECK(rel(g.values(10), 0.58940328340124658104) < 1e-12);
}

TEST_CASE("PSD of all engines at L = 128") {
    for (const auto& c : matrix()) {
        CAPTURE(std::string(c.name));
        CHECK(is_toeplitz_psd(acvf_sowell(c.spec, 128).values));
        CHECK(is_toeplitz_psd(acvf_spectral(c.spec, 128).values));
        CHECK(is_toeplitz_psd(acvf_ma_truncated(c.spec, 128, 1L << 16).acvf.values));
    }
}

TEST_CASE("dispatch: AR(1) without fractional integration") {
    const AcvfSequence g = acvf_sowell(make({0.5}, 0.0, {}), 30);
    for (long k = 0; k <= 30; ++k) CHECK(rel(g.values(k), std::pow(0.5, k) / (1 - 0.25)) < 1e-14);

    FarimaSpec arma = make({0.7, -0.2}, 0.0, {0.4});
    arma.sigma2_eps = 2.5;
    const AcvfSequence a = acvf_sowell(arma, 20);
    const AcvfSequence b = acvf_spectral(arma, 20);
    for (long k = 0; k <= 20; ++k) CHECK(std::abs(a.values(k) - b.values(k)) <= 1e-9 * a.values(0));
}

TEST_CASE("dispatch: fractional noise") {
    for (double d : {-0.3, 0.1, 0.45}) {
        CAPTURE(d);
        const AcvfSequence g = acvf_sowell(make({}, d, {}), 40);
        const double g0 = boost::math::tgamma(1 - 2 * d) / std::pow(boost::math::tgamma(1 - d), 2);
        CHECK(rel(g.values(0), g0) < 1e-13);
        const MaTruncatedAcvf ma = acvf_ma_truncated(make({}, d, {}), 40, 1L << 22);
        for (long k = 0; k <= 40; ++k) CHECK(rel(ma.acvf.values(k), g.values(k)) < 1e-6);
    }
    CHECK(rel(acvf_sowell(make({}, 0.45, {}), 0).values(0), 3.6424296291268529613) < 1e-13);
}

TEST_CASE("fractional noise decays monotonically") {
    for (double d : {0.05, 0.25, 0.45}) {
        const Eigen::VectorXd g = acvf_sowell(make({}, d, {}), 2000).values;
        for (long k = 0; k < 2000; ++k) {
            REQUIRE(g(k + 1) > 0.0);
            REQUIRE(g(k + 1) < g(k));
        }
    }
}

TEST_CASE("white noise through every engine") {
    FarimaSpec s = make({}, 0.0, {});
    s.sigma2_eps = 1.7;
    const AcvfSequence a = acvf_sowell(s, 5);
    const AcvfSequence b = acvf_spectral(s, 5);
    const MaTruncatedAcvf c = acvf_ma_truncated(s, 5, 64);
    for (const auto* v : {&a.values, &b.values, &c.acvf.values}) {
        CHECK(rel((*v)(0), 1.7) < 1e-12);
        for (long k = 1; k <= 5; ++k) CHECK(std::abs((*v)(k)) < 1e-12);
    }
}

TEST_CASE("MA truncation converges") {
    const FarimaSpec s = make({}, 0.3, {});
    const double a = acvf_ma_truncated(s, 0, 1L << 19).acvf.values(0);
    const double b = acvf_ma_truncated(s, 0, 1L << 20).acvf.values(0);
    CHECK(std::abs(a - b) < 1e-7);
    const MaTruncatedAcvf m = acvf_ma_truncated(s, 3, 1L << 12);
    for (long k = 0; k <= 3; ++k) {
        CHECK(m.tail(k) > 0.0);
        CHECK(rel(m.truncated(k) + m.tail(k), m.acvf.values(k)) < 1e-15);
    }
}

TEST_CASE("spectral engine at arbitrary lags") {
    const FarimaSpec s = make({0.5}, 0.3, {0.2});
    const AcvfSequence all = acvf_sowell(s, 200);
    const AcvfSequence some = acvf_spectral(s, std::vector<long>{3, 0, 200});
    REQUIRE(some.values.size() == 201);
    for (long k : {0L, 3L, 200L}) CHECK(rel(some.values(k), all.values(k)) < 1e-6);
    CHECK(std::isnan(some.values(1)));
    CHECK(spectral_density(s, 1.0) > 0.0);
    CHECK(rel(spectral_density(make({}, 0.0, {}), 2.0), 1 / (2 * M_PI)) < 1e-15);
}

TEST_CASE("aggregated order") {
    CHECK(std::abs(aggregated_order(1, 0.3, 1, 1000000) - 2.3) < 1e-5);
    CHECK(std::abs(aggregated_order(0, 0.0, 0, 2) - 0.5) < 1e-10);
    CHECK(std::abs(aggregated_order(2, 0.4, 3, 3) - (2 + 0.4 + 1 + (3 - 2 - 0.4 - 1) / 3.0)) < 1e-10);
    CHECK(std::abs(aggregated_order(2, 0.4, 3, 3) - 3.2666666666666667) < 1e-10);
    CHECK_THROWS_AS(aggregated_order(1, 0.3, 1, 1), DomainError);
}
