#include "mfgn/process.hpp"

namespace mfgn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

std::string process_kind(const ProcessSpec& spec) {
    return std::visit(overloaded{[](const FgnParams&) { return std::string("fgn"); },
                                 [](const Fou2Spec&) { return std::string("fou2"); },
                                 [](const FarimaSpec&) { return std::string("farima"); },
                                 [](const MixedParams&) { return std::string("mixed"); }},
                      spec);
}

void validate(const ProcessSpec& spec) {
    std::visit(overloaded{[](const Fou2Spec& s) { s.params.validate(); },
                          [](const auto& s) { s.validate(); }},
               spec);
}

AcvfSequence process_acvf(const ProcessSpec& spec, long max_lag) {
    return std::visit(
        overloaded{[&](const FgnParams& p) { return fgn_acvf_sequence(p, max_lag); },
                   [&](const Fou2Spec& s) {
                       return s.increments ? fou2_increment_acvf_sequence(s.params, max_lag)
                                           : fou2_acvf_sequence(s.params, max_lag);
                   },
                   [&](const FarimaSpec& p) { return acvf_sowell(p, max_lag); },
                   [&](const MixedParams& p) { return mixed_acvf_sequence(p, max_lag); }},
        spec);
}

double process_mean(const ProcessSpec& spec) {
    if (const auto* f = std::get_if<FarimaSpec>(&spec)) return f->mu;
    return 0.0;
}

}  // namespace mfgn
