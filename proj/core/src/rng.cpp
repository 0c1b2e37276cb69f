#include "pshlab/rng.hpp"

#include <cmath>

namespace pshlab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        const std::array<std::uint32_t, 4> next = {hi1 ^ ctr[1] ^ key[0], lo1,
                                                   hi0 ^ ctr[3] ^ key[1], lo0};
        ctr = next;
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

std::pair<double, double> GaussianStream::uniforms(std::uint64_t sample, std::uint32_t draw) const {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32), draw,
        static_cast<std::uint32_t>(stream_) ^ static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = philox4x32(ctr, key);
    const std::uint64_t bits0 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t bits1 = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    // 53-bit mantissas; u1 is shifted into (0, 1] so log(u1) stays finite
    const double u1 = (static_cast<double>(bits0 >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(bits1 >> 11) * 0x1p-53;
    return {u1, u2};
}

Cplx GaussianStream::coordinate(std::uint64_t sample, std::uint32_t j) const {
    const auto [u1, u2] = uniforms(sample, j);
    // Box-Muller scaled for per-real-part variance 1/2
    const double r = std::sqrt(-std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    return Cplx{r * std::cos(angle), r * std::sin(angle)};
}

CPoint GaussianStream::point(std::uint64_t sample, int n) const {
    CPoint w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        w[static_cast<std::size_t>(j)] = coordinate(sample, static_cast<std::uint32_t>(j));
    return w;
}

} // namespace pshlab
