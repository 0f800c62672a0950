// spcm: superposition-coded multicast distortion analysis and power allocation
// Copyright (C) 2026 spcm developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SPCM_RNG_HPP
#define SPCM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace spcm::rng {

// Philox4x32-10 counter-based generator (Random123 family).
//
// Every value is addressed by (seed, stream, block index): the 64-bit seed is
// the key, the stream id fills the high counter words and the block index the
// low ones. Draws can therefore be produced in any order, subsequences never
// overlap by construction, and results are identical across runs and
// platforms for a fixed seed.

struct Block {
    std::uint32_t w[4];
};

namespace detail {

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = 0xD2511F53ull * c[0];
    const std::uint64_t p1 = 0xCD9E8D57ull * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t t1 = c[1], t3 = c[3];
    c[0] = hi1 ^ t1 ^ k0;
    c[1] = lo1;
    c[2] = hi0 ^ t3 ^ k1;
    c[3] = lo0;
}

} // namespace detail

inline Block philox_block(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint32_t c[4] = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 0; r < 10; ++r) {
        detail::philox_round(c, k0, k1);
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return Block{{c[0], c[1], c[2], c[3]}};
}

// Two uniforms in the open interval (0,1) per block; 53 significant bits each.
inline void uniform2(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                     double out[2]) {
    const Block b = philox_block(seed, stream, index);
    const std::uint64_t a = (static_cast<std::uint64_t>(b.w[1]) << 32) | b.w[0];
    const std::uint64_t c = (static_cast<std::uint64_t>(b.w[3]) << 32) | b.w[2];
    out[0] = (static_cast<double>(a >> 11) + 0.5) * 0x1p-53;
    out[1] = (static_cast<double>(c >> 11) + 0.5) * 0x1p-53;
}

// Box-Muller pair of standard normals from one block.
inline void normal2(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                    double out[2]) {
    double u[2];
    uniform2(seed, stream, index, u);
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double t = 2.0 * std::numbers::pi * u[1];
    out[0] = r * std::cos(t);
    out[1] = r * std::sin(t);
}

// Block budget reserved per logical draw, so that rejection samplers stay
// inside their own draw's counter range.
inline constexpr std::uint64_t blocks_per_draw = 64;

// Gamma(shape, scale) variate addressed by (seed, stream, draw).
//
// Integer shapes use the sum of `shape` squared standard-normal pairs (one
// block each). Fractional shapes use Marsaglia-Tsang squeeze-rejection, with
// the shape<1 case boosted through Gamma(shape+1) and a uniform power.
inline double gamma_draw(double shape, double scale, std::uint64_t seed,
                         std::uint64_t stream, std::uint64_t draw) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma_draw: shape and scale must be positive");
    const std::uint64_t base = draw * blocks_per_draw;
    if (shape == std::floor(shape) && shape <= 48.0) {
        const int k = static_cast<int>(shape);
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
            double n[2];
            normal2(seed, stream, base + static_cast<std::uint64_t>(i), n);
            sum += n[0] * n[0] + n[1] * n[1];
        }
        return 0.5 * scale * sum;
    }
    const bool boost = shape < 1.0;
    const double a = boost ? shape + 1.0 : shape;
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (std::uint64_t attempt = 0; attempt + 1 < blocks_per_draw / 2; ++attempt) {
        double n[2], u[2];
        normal2(seed, stream, base + 2 * attempt, n);
        uniform2(seed, stream, base + 2 * attempt + 1, u);
        const double x = n[0];
        const double t = 1.0 + c * x;
        if (t <= 0.0)
            continue;
        const double v = t * t * t;
        const double x2 = x * x;
        if (u[0] < 1.0 - 0.0331 * x2 * x2 ||
            std::log(u[0]) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            double g = d * v * scale;
            if (boost)
                g *= std::pow(u[1], 1.0 / shape);
            return g;
        }
    }
    throw std::runtime_error("gamma_draw: rejection budget exhausted");
}

} // namespace spcm::rng

#endif
