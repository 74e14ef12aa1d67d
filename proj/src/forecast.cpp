#include "mfgn/forecast.hpp"

#include <algorithm>
#include <string>

#include "mfgn/errors.hpp"

namespace mfgn {

DurbinLevinson<double> durbin_levinson_coeffs(const AcvfSequence& acvf, long n) {
    acvf.validate();
    return durbin_levinson(acvf.values, n);
}

Predictor::Predictor(const AcvfSequence& acvf, long window, long horizon)
    : window_(window), horizon_(horizon) {
    acvf.validate();
    if (window < 1) throw DomainError("Predictor: window must be positive");
    if (horizon < 1) throw DomainError("Predictor: horizon must be positive");
    if (acvf.max_lag() < window + horizon - 1)
        throw DomainError("Predictor: autocovariances needed up to lag " +
                          std::to_string(window + horizon - 1));
    // g(i) pairs with the i-th oldest observation: lag n + k - 1 - i.
    Eigen::VectorXd g(window);
    for (long i = 0; i < window; ++i) g(i) = acvf.values(window + horizon - 1 - i);
    weights_ = levinson_solve(acvf.values, g);
    variance_ = std::max(0.0, acvf.values(0) - g.dot(weights_));
}

ForecastResult Predictor::operator()(std::span<const double> data, double mu) const {
    if (static_cast<long>(data.size()) != window_)
        throw DomainError("Predictor: expected " + std::to_string(window_) + " observations, got " +
                          std::to_string(data.size()));
    const Eigen::Map<const Eigen::VectorXd> x(data.data(), window_);
    const double mean = mu + weights_.dot((x.array() - mu).matrix());
    return {mean, variance_, horizon_, window_};
}

ForecastResult predict(const AcvfSequence& acvf, std::span<const double> data, double mu, long k) {
    return Predictor(acvf, static_cast<long>(data.size()), k)(data, mu);
}

}  // namespace mfgn
