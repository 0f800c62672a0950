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

#include "spcm/hiermod.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace spcm::hiermod {

int bits_per_symbol(Modulation m)
{
    switch (m) {
    case Modulation::bpsk: return 1;
    case Modulation::qpsk: return 2;
    case Modulation::qam16: return 4;
    case Modulation::qam64: return 6;
    }
    throw std::invalid_argument("bits_per_symbol: unknown modulation");
}

const char* modulation_name(Modulation m)
{
    switch (m) {
    case Modulation::bpsk: return "bpsk";
    case Modulation::qpsk: return "qpsk";
    case Modulation::qam16: return "16qam";
    case Modulation::qam64: return "64qam";
    }
    throw std::invalid_argument("modulation_name: unknown modulation");
}

Modulation modulation_from_name(const std::string& name)
{
    if (name == "bpsk") return Modulation::bpsk;
    if (name == "qpsk") return Modulation::qpsk;
    if (name == "16qam" || name == "qam16") return Modulation::qam16;
    if (name == "64qam" || name == "qam64") return Modulation::qam64;
    throw std::invalid_argument("modulation_from_name: unknown modulation '" + name + "'");
}

void HierScheme::validate() const
{
    if (layers.empty() || layers.size() > 4)
        throw std::invalid_argument("HierScheme: layer count must be in [1, 4]");
    if (beta.size() != layers.size())
        throw std::invalid_argument("HierScheme: beta length must match layer count");
    for (double b : beta) {
        if (!std::isfinite(b) || b < 0.0 || b > 1.0)
            throw std::invalid_argument("HierScheme: beta values must lie in [0, 1]");
    }
    if (!std::isfinite(symbol_energy) || symbol_energy <= 0.0)
        throw std::invalid_argument("HierScheme: symbol_energy must be positive and finite");
    if (!std::isfinite(noise_psd) || noise_psd <= 0.0)
        throw std::invalid_argument("HierScheme: noise_psd must be positive and finite");
}

HierScheme HierScheme::with_beta(const std::vector<double>& b) const
{
    HierScheme out = *this;
    out.beta = b;
    out.validate();
    return out;
}

double q_function(double x)
{
    return 0.5 * kernels::erfc1(x / std::numbers::sqrt2);
}

AxisLevels unit_levels(Modulation m)
{
    AxisLevels lv;
    auto pam = [](int half_count, double scale) {
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(2 * half_count));
        for (int k = -half_count; k <= half_count; ++k) {
            if (k == 0) continue;
            v.push_back(static_cast<double>(2 * k - (k > 0 ? 1 : -1)) * scale);
        }
        return v;
    };
    switch (m) {
    case Modulation::bpsk:
        lv.x = {-1.0, 1.0};
        lv.y = {0.0};
        break;
    case Modulation::qpsk:
        lv.x = pam(1, 1.0 / std::numbers::sqrt2);
        lv.y = lv.x;
        break;
    case Modulation::qam16:
        lv.x = pam(2, 1.0 / std::sqrt(10.0));
        lv.y = lv.x;
        break;
    case Modulation::qam64:
        lv.x = pam(4, 1.0 / std::sqrt(42.0));
        lv.y = lv.x;
        break;
    }
    return lv;
}

namespace {

// One axis of one layer: own amplitude levels plus the amplitude levels of
// every higher layer on the same axis.
struct AxisStack {
    std::vector<double> own;                    // scaled levels of this layer
    std::vector<std::vector<double>> interf;    // scaled levels of layers above
};

// Collapse an axis decision problem into (coefficient, weight) pairs for
// sum_t w_t * erfc(c_t * sqrt(h)). Averaging a uniform M-PAM layer's error
// over its own levels leaves (M-1)/M * [Q((u+d)/s) + Q((u-d)/s)] per
// interference offset d, u being the half spacing; folding Q into erfc puts
// 0.5 into the weight and 1/sqrt(2) into the coefficient.
void append_axis_terms(const AxisStack& st, double noise_psd, kernels::AxisTerms& out)
{
    const std::size_t m = st.own.size();
    if (m < 2) return;
    const double half_spacing = 0.5 * (st.own[1] - st.own[0]);
    const double base_weight = 0.5 * static_cast<double>(m - 1) / static_cast<double>(m);
    const double inv_noise_amp = 1.0 / std::sqrt(noise_psd);

    std::size_t patterns = 1;
    for (const auto& iv : st.interf) patterns *= iv.size();

    std::vector<std::size_t> idx(st.interf.size(), 0);
    const double pattern_weight = base_weight / static_cast<double>(patterns);
    for (std::size_t p = 0; p < patterns; ++p) {
        double offset = 0.0;
        for (std::size_t k = 0; k < st.interf.size(); ++k)
            offset += st.interf[k][idx[k]];
        out.coef.push_back((half_spacing + offset) * inv_noise_amp);
        out.weight.push_back(pattern_weight);
        out.coef.push_back((half_spacing - offset) * inv_noise_amp);
        out.weight.push_back(pattern_weight);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (++idx[k] < st.interf[k].size()) break;
            idx[k] = 0;
        }
    }
}

// Merge terms with bitwise-equal coefficients; sorting makes the table order
// (and therefore the floating-point accumulation order) deterministic.
void dedup_axis_terms(kernels::AxisTerms& t)
{
    const std::size_t n = t.coef.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (t.coef[a] != t.coef[b]) return t.coef[a] < t.coef[b];
        return a < b;
    });
    kernels::AxisTerms merged;
    merged.coef.reserve(n);
    merged.weight.reserve(n);
    for (std::size_t i : order) {
        if (!merged.coef.empty() && merged.coef.back() == t.coef[i])
            merged.weight.back() += t.weight[i];
        else {
            merged.coef.push_back(t.coef[i]);
            merged.weight.push_back(t.weight[i]);
        }
    }
    t = std::move(merged);
}

double axis_error_at(const kernels::AxisTerms& t, double sqrt_h)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < t.coef.size(); ++i)
        acc = std::fma(t.weight[i], kernels::erfc1(t.coef[i] * sqrt_h), acc);
    if (acc < 0.0) acc = 0.0;
    if (acc > 1.0) acc = 1.0;
    return acc;
}

// Guess-error probability of an axis with M equiprobable levels when the
// received signal carries no information: the detector picks one level, and
// any other transmitted level counts as an error.
double guess_error(std::size_t m)
{
    return m < 2 ? 0.0 : 1.0 - 1.0 / static_cast<double>(m);
}

} // namespace

kernels::SerTable build_ser_table(const HierScheme& scheme, ZeroPowerPolicy policy)
{
    scheme.validate();
    const std::size_t nl = scheme.layers.size();

    std::vector<AxisLevels> scaled(nl);
    std::vector<double> amp(nl);
    for (std::size_t l = 0; l < nl; ++l) {
        amp[l] = std::sqrt(scheme.beta[l] * scheme.symbol_energy);
        scaled[l] = unit_levels(scheme.layers[l]);
        for (double& v : scaled[l].x) v *= amp[l];
        for (double& v : scaled[l].y) v *= amp[l];
    }

    kernels::SerTable table;
    table.layers.resize(nl);
    table.zero_gain_lost = (policy == ZeroPowerPolicy::lost);

    for (std::size_t l = 0; l < nl; ++l) {
        kernels::LayerTerms& lt = table.layers[l];
        if (amp[l] == 0.0) {
            if (policy == ZeroPowerPolicy::lost) {
                lt.dead = true;
                continue;
            }
            // Guess-rate semantics: constant error probability, expressed as
            // a single erfc term with coefficient 0 (erfc(0) = 1).
            const AxisLevels& ul = scaled[l];
            const double px = guess_error(ul.x.size());
            const double py = guess_error(ul.y.size());
            const double combined = 1.0 - (1.0 - px) * (1.0 - py);
            if (combined > 0.0) {
                lt.x.coef.push_back(0.0);
                lt.x.weight.push_back(combined);
            }
            continue;
        }
        AxisStack sx, sy;
        sx.own = scaled[l].x;
        sy.own = scaled[l].y;
        for (std::size_t k = l + 1; k < nl; ++k) {
            if (amp[k] == 0.0) continue;
            sx.interf.push_back(scaled[k].x);
            sy.interf.push_back(scaled[k].y);
        }
        append_axis_terms(sx, scheme.noise_psd, lt.x);
        append_axis_terms(sy, scheme.noise_psd, lt.y);
        dedup_axis_terms(lt.x);
        dedup_axis_terms(lt.y);
    }
    return table;
}

LayerSerProfile layer_ser_profile(double h, const HierScheme& scheme)
{
    if (!std::isfinite(h) || h < 0.0)
        throw std::domain_error("layer_ser_profile: gain must be finite and nonnegative");
    const kernels::SerTable table = build_ser_table(scheme, ZeroPowerPolicy::guess_rate);
    const double s = std::sqrt(h);
    LayerSerProfile prof;
    prof.cond_ser.reserve(table.layers.size());
    for (const auto& lt : table.layers) {
        const double px = axis_error_at(lt.x, s);
        const double py = axis_error_at(lt.y, s);
        prof.cond_ser.push_back(1.0 - (1.0 - px) * (1.0 - py));
    }
    return prof;
}

namespace {

void require_qpsk_pair(const HierScheme& scheme, const char* who)
{
    scheme.validate();
    if (scheme.layers.size() != 2 || scheme.layers[0] != Modulation::qpsk ||
        scheme.layers[1] != Modulation::qpsk)
        throw std::invalid_argument(std::string(who) + ": scheme must be two QPSK layers");
}

} // namespace

double qpsk_qpsk_base_ser(double h, const HierScheme& scheme)
{
    require_qpsk_pair(scheme, "qpsk_qpsk_base_ser");
    if (!std::isfinite(h) || h < 0.0)
        throw std::domain_error("qpsk_qpsk_base_ser: gain must be finite and nonnegative");
    const double e1 = scheme.beta[0] * scheme.symbol_energy * h;
    const double e2 = scheme.beta[1] * scheme.symbol_energy * h;
    const double s = std::sqrt(2.0 / scheme.noise_psd);
    const double minus = q_function(s * (std::sqrt(e1 / 2.0) - std::sqrt(e2 / 2.0)));
    const double plus = q_function(s * (std::sqrt(e1 / 2.0) + std::sqrt(e2 / 2.0)));

    // Average over the four enhancement-symbol quadrants: each flips the sign
    // of the interference term independently on the two axes.
    double acc = 0.0;
    const double px[4] = {minus, plus, minus, plus};
    const double py[4] = {plus, plus, minus, minus};
    for (int q = 0; q < 4; ++q)
        acc += 1.0 - (1.0 - px[q]) * (1.0 - py[q]);
    return acc / 4.0;
}

double qpsk_qpsk_enh_ser_cond(double h, const HierScheme& scheme)
{
    require_qpsk_pair(scheme, "qpsk_qpsk_enh_ser_cond");
    if (!std::isfinite(h) || h < 0.0)
        throw std::domain_error("qpsk_qpsk_enh_ser_cond: gain must be finite and nonnegative");
    const double g = q_function(std::sqrt(h * scheme.beta[1] * scheme.symbol_energy /
                                          scheme.noise_psd));
    return 2.0 * g - g * g;
}

} // namespace spcm::hiermod
