#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ransim {

/// Deterministic random stream derived from (seed, label).
///
/// Streams with different labels are seeded independently, so drawing from
/// the failure stream never perturbs the traffic or QoS streams. All variates
/// are derived from the raw 64-bit engine output by hand; std distributions are
/// implementation-defined and would break cross-toolchain reproducibility.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    double standard_normal();

    /// Uniform integer on [0, n). `n` must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Number of raw 64-bit words consumed so far.
    std::uint64_t draws() const noexcept { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

/// Mixes a seed and a stream label into a 64-bit engine seed.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view label) noexcept;

inline RngStream seeded_rng(std::uint64_t seed, std::string_view label) {
    return RngStream(seed, label);
}

}  // namespace ransim
