#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace logguard {

/// Fully connected network, tanh on hidden layers, linear output.
/// Parameters live in one flat vector: for each layer the weight matrix
/// (out x in, row-major) followed by the bias.
class Mlp {
public:
    struct Trace {
        std::vector<std::vector<double>> activations;  // input, then each layer's output
    };

    Mlp() = default;
    Mlp(std::vector<std::size_t> layer_sizes, std::mt19937_64& rng);

    std::size_t input_size() const { return sizes_.front(); }
    std::size_t output_size() const { return sizes_.back(); }
    std::size_t parameter_count() const { return params_.size(); }
    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }

    std::vector<double> forward(std::span<const double> input) const;
    std::vector<double> forward(std::span<const double> input, Trace& trace) const;

    // Accumulates d(loss)/d(params) into `grad` given d(loss)/d(output).
    void backward(const Trace& trace, std::span<const double> grad_output,
                  std::span<double> grad) const;

    std::span<double> parameters() { return params_; }
    std::span<const double> parameters() const { return params_; }
    bool all_finite() const;

    friend bool operator==(const Mlp&, const Mlp&) = default;

private:
    std::vector<std::size_t> sizes_;
    std::vector<double> params_;
    std::vector<std::size_t> offsets_;  // start of each layer's weights
};

}  // namespace logguard
