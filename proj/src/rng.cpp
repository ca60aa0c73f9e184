#include "ransim/rng.hpp"

#include <cmath>
#include <numbers>

namespace ransim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view label) noexcept {
    return splitmix64(splitmix64(seed) ^ fnv1a(label));
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : engine_(derive_stream_seed(seed, label)) {}

std::uint64_t RngStream::next_u64() {
    ++draws_;
    return engine_();
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RngStream::standard_normal() {
    // Box-Muller; one pair per call, second variate discarded so the draw
    // count per call is fixed at two.
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::below(std::uint64_t n) {
    // 2^64 mod n, computed without overflow; values below it are rejected.
    const std::uint64_t threshold = (std::uint64_t{0} - n) % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x < threshold);
    return x % n;
}

}  // namespace ransim
