#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pnav/rng.hpp"

namespace pnav {

enum class Activation { ReLU, Identity };

/// Fully-connected layer, 64-bit weights, row-major (out x in).
struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> weights; // out * in
    std::vector<double> biases;  // out
    Activation activation = Activation::Identity;
};

struct DenseNet {
    std::vector<Layer> layers;

    int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
    int output_dim() const { return layers.empty() ? 0 : layers.back().out; }
    std::size_t parameter_count() const;
};

/// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases. The last
/// activation should be Identity for value outputs.
DenseNet make_dense_net(const std::vector<int>& dims,
                        const std::vector<Activation>& activations, Rng& rng);

std::vector<double> forward(const DenseNet& net, std::span<const double> x);

/// Per-layer activations kept for the backward pass.
struct ForwardCache {
    std::vector<std::vector<double>> inputs;  // input to each layer
    std::vector<std::vector<double>> pre;     // affine outputs
    std::vector<double> output;
};

ForwardCache forward_cached(const DenseNet& net, std::span<const double> x);

struct Gradients {
    std::vector<std::vector<double>> dweights;
    std::vector<std::vector<double>> dbiases;
    std::vector<double> dinput;

    void accumulate(const Gradients& other);
    void scale(double s);
};

Gradients make_zero_gradients(const DenseNet& net);

/// Exact reverse-mode gradients; ReLU subgradient at 0 is 0.
Gradients backward(const DenseNet& net, const ForwardCache& cache,
                   std::span<const double> grad_out);

/// Adaptive-moment optimizer state (first/second moments, bias-corrected).
struct AdamState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
};

AdamState make_adam_state(const DenseNet& net, double learning_rate = 1e-3);

void optimizer_step(DenseNet& net, const Gradients& grads, AdamState& opt);

/// Checkpoint container: text header (layer dims, activations, optimizer
/// hyperparameters) followed by raw little-endian 64-bit parameters in layer
/// order (weights then biases). Round-trips bit-exactly.
void save_checkpoint(const DenseNet& net, const AdamState& opt,
                     const std::string& path);

struct Checkpoint {
    DenseNet net;
    AdamState opt;
};

Checkpoint load_checkpoint(const std::string& path);

} // namespace pnav
