#pragma once

#include <string>
#include <variant>

#include "mfgn/acvf.hpp"
#include "mfgn/farima.hpp"
#include "mfgn/kernels.hpp"

namespace mfgn {

/// fOU₂ either as the stationary level process or as its grid increments.
struct Fou2Spec {
    Fou2Params params;
    bool increments = true;
};

using ProcessSpec = std::variant<FgnParams, Fou2Spec, FarimaSpec, MixedParams>;

/// "fgn", "fou2", "farima" or "mixed".
std::string process_kind(const ProcessSpec& spec);

void validate(const ProcessSpec& spec);

/// Autocovariances at lags 0..max_lag; FARIMA uses the closed form.
AcvfSequence process_acvf(const ProcessSpec& spec, long max_lag);

/// Long-run mean used for forecasting; zero except for FARIMA.
double process_mean(const ProcessSpec& spec);

}  // namespace mfgn
