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

#include <stdexcept>
#include <string>

#include "spcm/detail/erfc_core.hpp"
#include "spcm/detail/kernels_impl.hpp"

namespace spcm::kernels {

namespace {

Backend g_requested = Backend::auto_detect;

Backend resolve(Backend b) {
    if (b == Backend::auto_detect)
        return avx2_available() ? Backend::avx2 : Backend::scalar;
    return b;
}

} // namespace

bool avx2_available() {
#ifdef SPCM_HAVE_AVX2_TU
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        throw std::invalid_argument("kernels: avx2 backend not available on this CPU");
    g_requested = b;
}

Backend active_backend() {
    return resolve(g_requested);
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::auto_detect: return "auto";
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

Backend backend_from_name(const char* name) {
    const std::string s(name);
    if (s == "auto")
        return Backend::auto_detect;
    if (s == "scalar")
        return Backend::scalar;
    if (s == "avx2")
        return Backend::avx2;
    throw std::invalid_argument("kernels: unknown backend name '" + s + "'");
}

double erfc1(double x) {
    return detail::erfc_scalar(x);
}

void erfc_batch(const double* x, double* y, std::size_t n) {
#ifdef SPCM_HAVE_AVX2_TU
    if (resolve(g_requested) == Backend::avx2)
        return detail::erfc_batch_avx2(x, y, n);
#endif
    detail::erfc_batch_scalar(x, y, n);
}

void exp_batch(const double* x, double* y, std::size_t n) {
#ifdef SPCM_HAVE_AVX2_TU
    if (resolve(g_requested) == Backend::avx2)
        return detail::exp_batch_avx2(x, y, n);
#endif
    detail::exp_batch_scalar(x, y, n);
}

void cum_ser_batch(const SerTable& table, const double* h, std::size_t n, double* cum) {
#ifdef SPCM_HAVE_AVX2_TU
    if (resolve(g_requested) == Backend::avx2)
        return detail::cum_ser_batch_avx2(table, h, n, cum);
#endif
    detail::cum_ser_batch_scalar(table, h, n, cum);
}

} // namespace spcm::kernels
