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

#include <cmath>

#include "spcm/detail/erfc_core.hpp"
#include "spcm/detail/kernels_impl.hpp"

namespace spcm::kernels::detail {

namespace {

// Term accumulation must mirror the AVX2 variant operation-for-operation
// (fma accumulation in table order, then clamp) so backends agree bitwise.
double axis_error(const AxisTerms& a, double s) {
    double acc = 0.0;
    const std::size_t m = a.coef.size();
    for (std::size_t j = 0; j < m; ++j)
        acc = std::fma(a.weight[j], erfc_scalar(a.coef[j] * s), acc);
    if (acc < 0.0)
        acc = 0.0;
    if (acc > 1.0)
        acc = 1.0;
    return acc;
}

} // namespace

void erfc_batch_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] = erfc_scalar(x[i]);
}

void exp_batch_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] = exp_scalar(x[i]);
}

void cum_ser_one_scalar(const SerTable& table, double h, double* out, std::size_t stride) {
    const bool lost = table.zero_gain_lost && h == 0.0;
    const double s = std::sqrt(h);
    double prod = 1.0;
    for (std::size_t l = 0; l < table.layers.size(); ++l) {
        const LayerTerms& lt = table.layers[l];
        if (lt.dead || lost) {
            prod = 0.0;
        } else {
            const double px = axis_error(lt.x, s);
            const double py = axis_error(lt.y, s);
            prod = prod * ((1.0 - px) * (1.0 - py));
        }
        out[l * stride] = 1.0 - prod;
    }
}

void cum_ser_batch_scalar(const SerTable& table, const double* h, std::size_t n,
                          double* cum) {
    for (std::size_t i = 0; i < n; ++i)
        cum_ser_one_scalar(table, h[i], cum + i, n);
}

} // namespace spcm::kernels::detail
