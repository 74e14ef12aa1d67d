#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mfgn {

/// Philox4x32-10 block: 128-bit counter and 64-bit key in, 128 bits out.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based generator. The seed is the key; the stream index occupies
/// the upper counter words, so distinct streams never overlap.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform on (0, 1].
    double uniform_open0();
    /// Standard normal via Box–Muller.
    double normal();

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mfgn
