#include "logguard/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logguard {

Mlp::Mlp(std::vector<std::size_t> layer_sizes, std::mt19937_64& rng) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("an MLP needs at least input and output sizes");
    if (std::find(sizes_.begin(), sizes_.end(), 0u) != sizes_.end()) {
        throw std::invalid_argument("layer sizes must be positive");
    }
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        offsets_.push_back(total);
        total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    }
    params_.assign(total, 0.0);
    // Glorot-uniform weights, zero biases.
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const std::size_t in = sizes_[l], out = sizes_[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        std::uniform_real_distribution<double> init(-limit, limit);
        for (std::size_t i = 0; i < in * out; ++i) params_[offsets_[l] + i] = init(rng);
    }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
    Trace trace;
    return forward(input, trace);
}

std::vector<double> Mlp::forward(std::span<const double> input, Trace& trace) const {
    if (input.size() != input_size()) throw std::invalid_argument("MLP input has the wrong size");
    trace.activations.resize(sizes_.size());
    trace.activations[0].assign(input.begin(), input.end());
    const std::size_t layers = sizes_.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = sizes_[l], out = sizes_[l + 1];
        const double* w = params_.data() + offsets_[l];
        const double* b = w + in * out;
        const auto& x = trace.activations[l];
        auto& y = trace.activations[l + 1];
        y.assign(out, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            double z = b[o];
            const double* row = w + o * in;
            for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
            y[o] = (l + 1 < layers) ? std::tanh(z) : z;
        }
    }
    return trace.activations.back();
}

void Mlp::backward(const Trace& trace, std::span<const double> grad_output,
                   std::span<double> grad) const {
    if (grad_output.size() != output_size() || grad.size() != params_.size()) {
        throw std::invalid_argument("MLP backward received mis-sized buffers");
    }
    const std::size_t layers = sizes_.size() - 1;
    std::vector<double> delta(grad_output.begin(), grad_output.end());
    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t in = sizes_[l], out = sizes_[l + 1];
        const double* w = params_.data() + offsets_[l];
        double* gw = grad.data() + offsets_[l];
        double* gb = gw + in * out;
        const auto& x = trace.activations[l];
        for (std::size_t o = 0; o < out; ++o) {
            gb[o] += delta[o];
            for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * x[i];
        }
        if (l == 0) break;
        // Through the tanh of the layer below: d tanh(z) = 1 - tanh(z)^2.
        std::vector<double> below(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            for (std::size_t i = 0; i < in; ++i) below[i] += w[o * in + i] * delta[o];
        }
        for (std::size_t i = 0; i < in; ++i) below[i] *= 1.0 - x[i] * x[i];
        delta = std::move(below);
    }
}

bool Mlp::all_finite() const {
    return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace logguard
