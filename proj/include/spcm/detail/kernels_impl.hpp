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

#ifndef SPCM_DETAIL_KERNELS_IMPL_HPP
#define SPCM_DETAIL_KERNELS_IMPL_HPP

#include "spcm/kernels.hpp"

namespace spcm::kernels::detail {

void erfc_batch_scalar(const double* x, double* y, std::size_t n);
void exp_batch_scalar(const double* x, double* y, std::size_t n);
void cum_ser_one_scalar(const SerTable& table, double h, double* out, std::size_t stride);
void cum_ser_batch_scalar(const SerTable& table, const double* h, std::size_t n,
                          double* cum);

#ifdef SPCM_HAVE_AVX2_TU
void erfc_batch_avx2(const double* x, double* y, std::size_t n);
void exp_batch_avx2(const double* x, double* y, std::size_t n);
void cum_ser_batch_avx2(const SerTable& table, const double* h, std::size_t n,
                        double* cum);
#endif

} // namespace spcm::kernels::detail

#endif
