#pragma once

#include <array>
#include <cstdint>

#include "pshlab/expr.hpp"

namespace pshlab {

/// Monte Carlo configuration. The same (seed, stream, samples) triple replays
/// the identical estimate bit-for-bit within one artifact version.
struct MCConfig {
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Philox4x32-10 block cipher: 128-bit counter, 64-bit key, 128-bit output.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Splittable counter-based Gaussian stream. Every draw is a pure function of
/// (seed, stream, sample index, coordinate), so sampling is stateless and
/// safe to partition across workers.
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    /// Two independent uniforms; the first lies in (0, 1], the second in [0, 1).
    std::pair<double, double> uniforms(std::uint64_t sample, std::uint32_t draw) const;

    /// Coordinate z = x + iy with x, y independent Normal(0, 1/2), so that
    /// E[z conj(z)] = 1.
    Cplx coordinate(std::uint64_t sample, std::uint32_t j) const;

    /// Standard complex Gaussian point in C^n.
    CPoint point(std::uint64_t sample, int n) const;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// Draws the k-th point of the stream; kept as a named entry point mirroring
/// the sampler contract.
inline CPoint sample_complex_gaussian(int n, const GaussianStream& stream, std::uint64_t k) {
    return stream.point(k, n);
}

} // namespace pshlab
