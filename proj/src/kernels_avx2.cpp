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

// AVX2/FMA lane-parallel variants of the batch kernels. The operation
// sequence mirrors the scalar reference in erfc_core.hpp exactly; remainder
// elements fall back to the scalar routines.

#include <immintrin.h>

#include "spcm/detail/erfc_core.hpp"
#include "spcm/detail/kernels_impl.hpp"

namespace spcm::kernels::detail {

namespace {

inline __m256d exp4(__m256d x) {
    const __m256d lo = _mm256_set1_pd(exp_lo_clamp);
    const __m256d hi = _mm256_set1_pd(exp_hi_clamp);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d nd = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(exp_log2e)),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(exp_c1), x);
    r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(exp_c2), r);

    __m256d acc = _mm256_set1_pd(exp_taylor[13]);
    for (int k = 12; k >= 0; --k)
        acc = _mm256_fmadd_pd(acc, r, _mm256_set1_pd(exp_taylor[k]));

    // 2^n via exponent-field arithmetic, split in two so intermediate scale
    // factors stay normal (floor split matches the scalar reference).
    const __m128i n32 = _mm256_cvtpd_epi32(nd);
    const __m128i n32_half = _mm_srai_epi32(n32, 1);
    const __m128i n32_rest = _mm_sub_epi32(n32, n32_half);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256i e1 =
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n32_half), bias), 52);
    const __m256i e2 =
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n32_rest), bias), 52);
    acc = _mm256_mul_pd(acc, _mm256_castsi256_pd(e1));
    acc = _mm256_mul_pd(acc, _mm256_castsi256_pd(e2));
    return acc;
}

inline __m256d erfc4(__m256d x) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d ax = _mm256_andnot_pd(sign_mask, x);
    const __m256d z = _mm256_mul_pd(x, x);

    // erf rational for |x| < 1 (argument x^2)
    __m256d num_s = _mm256_set1_pd(erf_T[0]);
    for (int k = 1; k < 5; ++k)
        num_s = _mm256_fmadd_pd(num_s, z, _mm256_set1_pd(erf_T[k]));
    __m256d den_s = _mm256_add_pd(z, _mm256_set1_pd(erf_U[0]));
    for (int k = 1; k < 5; ++k)
        den_s = _mm256_fmadd_pd(den_s, z, _mm256_set1_pd(erf_U[k]));

    // exp(-x^2) with rounding correction, shared by both erfc rationals
    const __m256d zlo = _mm256_fmsub_pd(ax, ax, z);
    __m256d e = exp4(_mm256_sub_pd(_mm256_setzero_pd(), z));
    e = _mm256_fnmadd_pd(e, zlo, e);

    __m256d num_m = _mm256_set1_pd(erfc_P[0]);
    for (int k = 1; k < 9; ++k)
        num_m = _mm256_fmadd_pd(num_m, ax, _mm256_set1_pd(erfc_P[k]));
    __m256d den_m = _mm256_add_pd(ax, _mm256_set1_pd(erfc_Q[0]));
    for (int k = 1; k < 8; ++k)
        den_m = _mm256_fmadd_pd(den_m, ax, _mm256_set1_pd(erfc_Q[k]));

    // Asymptotic tail in t = 1/x^2; lanes below 8 produce garbage here and
    // are blended away before any arithmetic uses them.
    const __m256d t = _mm256_div_pd(one, z);
    __m256d num_r = _mm256_set1_pd(erfc_tail[0]);
    for (int k = 1; k < 16; ++k)
        num_r = _mm256_fmadd_pd(num_r, t, _mm256_set1_pd(erfc_tail[k]));
    const __m256d den_r = _mm256_mul_pd(ax, _mm256_set1_pd(sqrt_pi));

    const __m256d mid = _mm256_cmp_pd(ax, _mm256_set1_pd(8.0), _CMP_LT_OQ);
    const __m256d small = _mm256_cmp_pd(ax, one, _CMP_LT_OQ);
    const __m256d neg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);

    __m256d num_b = _mm256_mul_pd(e, _mm256_blendv_pd(num_r, num_m, mid));
    const __m256d den_b = _mm256_blendv_pd(den_r, den_m, mid);

    const __m256d num = _mm256_blendv_pd(num_b, _mm256_mul_pd(x, num_s), small);
    const __m256d den = _mm256_blendv_pd(den_b, den_s, small);
    const __m256d ratio = _mm256_div_pd(num, den);

    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d y_big = _mm256_blendv_pd(ratio, _mm256_sub_pd(two, ratio), neg);
    const __m256d y_small = _mm256_sub_pd(one, ratio);
    return _mm256_blendv_pd(y_big, y_small, small);
}

inline __m256d axis_error4(const AxisTerms& a, __m256d s) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t m = a.coef.size();
    for (std::size_t j = 0; j < m; ++j) {
        const __m256d arg = _mm256_mul_pd(_mm256_set1_pd(a.coef[j]), s);
        acc = _mm256_fmadd_pd(_mm256_set1_pd(a.weight[j]), erfc4(arg), acc);
    }
    acc = _mm256_max_pd(acc, _mm256_setzero_pd());
    acc = _mm256_min_pd(acc, _mm256_set1_pd(1.0));
    return acc;
}

} // namespace

void erfc_batch_avx2(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, erfc4(_mm256_loadu_pd(x + i)));
    if (i < n)
        erfc_batch_scalar(x + i, y + i, n - i);
}

void exp_batch_avx2(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
    if (i < n)
        exp_batch_scalar(x + i, y + i, n - i);
}

void cum_ser_batch_avx2(const SerTable& table, const double* h, std::size_t n,
                        double* cum) {
    const std::size_t num_layers = table.layers.size();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d hv = _mm256_loadu_pd(h + i);
        const __m256d s = _mm256_sqrt_pd(hv);
        const __m256d lost =
            table.zero_gain_lost
                ? _mm256_cmp_pd(hv, _mm256_setzero_pd(), _CMP_EQ_OQ)
                : _mm256_setzero_pd();
        __m256d prod = one;
        for (std::size_t l = 0; l < num_layers; ++l) {
            const LayerTerms& lt = table.layers[l];
            if (lt.dead) {
                prod = _mm256_setzero_pd();
            } else {
                const __m256d px = axis_error4(lt.x, s);
                const __m256d py = axis_error4(lt.y, s);
                const __m256d ok =
                    _mm256_mul_pd(_mm256_sub_pd(one, px), _mm256_sub_pd(one, py));
                prod = _mm256_mul_pd(prod, ok);
            }
            __m256d out = _mm256_sub_pd(one, prod);
            out = _mm256_blendv_pd(out, one, lost);
            _mm256_storeu_pd(cum + l * n + i, out);
        }
    }
    for (; i < n; ++i)
        cum_ser_one_scalar(table, h[i], cum + i, n);
}

} // namespace spcm::kernels::detail
