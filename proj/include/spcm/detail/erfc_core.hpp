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

// Shared constants and the scalar reference algorithm for the batched
// erfc/exp kernels. The AVX2 translation unit mirrors this exact operation
// sequence with intrinsics so that scalar and vector lanes agree to the few-
// ulp level; keep both sides in lockstep when editing.

#ifndef SPCM_DETAIL_ERFC_CORE_HPP
#define SPCM_DETAIL_ERFC_CORE_HPP

#include <cmath>
#include <cstdint>

namespace spcm::kernels::detail {

// erf on |x| < 1 as x*T(x^2)/U(x^2) and erfc on [1,8) as exp(-x^2)*P(x)/Q(x),
// rational approximations from the Cephes math library (ndtr.c); Q and U
// carry an implicit leading 1. On [8,~27) the classical asymptotic expansion
//   erfc(x) = exp(-x^2) / (x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2 x^2)^k
// takes over: with terms through k = 15 the truncation error at x = 8 is
// below 4e-17 and falls off as x^-32, and every coefficient
// (-1)^k (2k-1)!!/2^k is exactly representable.
inline constexpr double erf_T[5] = {
    9.60497373987051638749E0, 9.00260197203842689217E1, 2.23200534594684319226E3,
    7.00332514112805075473E3, 5.55923013010394962768E4};
inline constexpr double erf_U[5] = {
    3.35617141647503099647E1, 5.21357949780152679795E2, 4.59432382970980127987E3,
    2.26290000613890934246E4, 4.92673942608635921086E4};
inline constexpr double erfc_P[9] = {
    2.46196981473530512524E-10, 5.64189564831068821977E-1, 7.46321056442269912687E0,
    4.86371970985681366614E1,   1.96520832956077098242E2,  5.26445194995477358631E2,
    9.34528527171957607540E2,   1.02755188689515710272E3,  5.57535335369399327526E2};
inline constexpr double erfc_Q[8] = {
    1.32281951154744992508E1, 8.67072140885989742329E1, 3.54937778887819891062E2,
    9.75708501743205489753E2, 1.82390916687909736289E3, 2.24633760818710981792E3,
    1.65666309194161350182E3, 5.57535340817727675546E2};
// Highest order first, evaluated by Horner in t = 1/x^2.
inline constexpr double erfc_tail[16] = {
    -6190283353629375.0 / 32768.0, 213458046676875.0 / 16384.0,
    -7905853580625.0 / 8192.0,     316234143225.0 / 4096.0,
    -13749310575.0 / 2048.0,       654729075.0 / 1024.0,
    -34459425.0 / 512.0,           2027025.0 / 256.0,
    -135135.0 / 128.0,             10395.0 / 64.0,
    -945.0 / 32.0,                 105.0 / 16.0,
    -15.0 / 8.0,                   3.0 / 4.0,
    -1.0 / 2.0,                    1.0};
inline constexpr double sqrt_pi = 1.77245385090551602729816748334;

// exp: Cody-Waite reduction x = n*ln2 + r, |r| <= ln2/2, then a degree-13
// Taylor polynomial in r (max relative error ~4e-18 on the reduced range).
inline constexpr double exp_log2e = 1.4426950408889634073599;
inline constexpr double exp_c1 = 6.93145751953125E-1;
inline constexpr double exp_c2 = 1.42860682030941723212E-6;
// The high clamp must stay below ln(DBL_MAX) ~ 709.7827 or the scaled
// result overflows to infinity instead of saturating.
inline constexpr double exp_lo_clamp = -746.0;
inline constexpr double exp_hi_clamp = 709.78;
inline constexpr double exp_taylor[14] = {
    1.0,
    1.0,
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362880.0,
    1.0 / 3628800.0,
    1.0 / 39916800.0,
    1.0 / 479001600.0,
    1.0 / 6227020800.0};

inline double exp_scalar(double x) {
    if (x < exp_lo_clamp)
        x = exp_lo_clamp;
    if (x > exp_hi_clamp)
        x = exp_hi_clamp;
    const double nd = std::nearbyint(x * exp_log2e);
    double r = std::fma(-nd, exp_c1, x);
    r = std::fma(-nd, exp_c2, r);
    double acc = exp_taylor[13];
    for (int k = 12; k >= 0; --k)
        acc = std::fma(acc, r, exp_taylor[k]);
    // Two-step 2^n scaling keeps n in the normal-exponent range even when the
    // final result is subnormal. Floor split (n >> 1) matches the vector TU.
    const auto n = static_cast<std::int64_t>(nd);
    const std::int64_t n1 = n >> 1;
    const std::int64_t n2 = n - n1;
    const auto pow2 = [](std::int64_t e) {
        std::uint64_t bits = static_cast<std::uint64_t>(e + 1023) << 52;
        double d;
        __builtin_memcpy(&d, &bits, sizeof d);
        return d;
    };
    return acc * pow2(n1) * pow2(n2);
}

inline double erfc_scalar(double x) {
    const double ax = std::fabs(x);
    const double z = x * x;
    if (ax < 1.0) {
        double num = erf_T[0];
        for (int k = 1; k < 5; ++k)
            num = std::fma(num, z, erf_T[k]);
        double den = z + erf_U[0];
        for (int k = 1; k < 5; ++k)
            den = std::fma(den, z, erf_U[k]);
        return 1.0 - (x * num) / den;
    }
    // exp(-x^2) with a correction for the rounding of x*x.
    const double zlo = std::fma(ax, ax, -z);
    double e = exp_scalar(-z);
    e = std::fma(-e, zlo, e);
    double num, den;
    if (ax < 8.0) {
        num = erfc_P[0];
        for (int k = 1; k < 9; ++k)
            num = std::fma(num, ax, erfc_P[k]);
        den = ax + erfc_Q[0];
        for (int k = 1; k < 8; ++k)
            den = std::fma(den, ax, erfc_Q[k]);
    } else {
        const double t = 1.0 / z;
        num = erfc_tail[0];
        for (int k = 1; k < 16; ++k)
            num = std::fma(num, t, erfc_tail[k]);
        den = ax * sqrt_pi;
    }
    const double y = (e * num) / den;
    return x < 0.0 ? 2.0 - y : y;
}

} // namespace spcm::kernels::detail

#endif
