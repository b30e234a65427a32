#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usvswarm/rng.hpp"

namespace usvswarm {

// Row-major dense matrix of doubles. All network math is 64-bit so the
// gradient checks can hold tight tolerances.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    static Matrix row(const std::vector<double>& v);
};

enum class Activation { ReLU, Tanh, Identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Parameters of a dense MLP. weights[l] has shape
// (layer_sizes[l+1], layer_sizes[l]); biases[l] has layer_sizes[l+1] entries.
struct MlpParams {
    std::vector<int> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    Activation hidden_activation = Activation::ReLU;
    Activation output_activation = Activation::Identity;

    int input_size() const { return layer_sizes.front(); }
    int output_size() const { return layer_sizes.back(); }
    size_t layer_count() const { return weights.size(); }
};

// Gradients share the parameter layout.
using MlpGrads = MlpParams;

struct AdamState {
    std::vector<Matrix> weight_m, weight_v;
    std::vector<std::vector<double>> bias_m, bias_v;
    uint64_t step_count = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre_activations;
    std::vector<Matrix> post_activations;
};

// Xavier-uniform weights, zero biases. Same (sizes, seed) gives
// bit-identical parameters.
MlpParams mlp_init(const std::vector<int>& layer_sizes, Activation hidden,
                   Activation output, uint64_t seed);

AdamState adam_init(const MlpParams& params, double learning_rate);

// Batched forward pass; input is (batch, layer_sizes[0]).
Matrix mlp_forward(const MlpParams& params, const Matrix& input, ForwardCache* cache = nullptr);

// Exact gradients of sum(output .* output_grad) w.r.t. every parameter and
// the input. The input gradient is what lets the actor update chain
// through the critic.
MlpGrads mlp_backward(const MlpParams& params, const ForwardCache& cache,
                      const Matrix& output_grad, Matrix* input_grad = nullptr);

MlpGrads zero_grads(const MlpParams& params);

// Standard Adam with bias correction; throws on non-finite gradients,
// naming the offending layer.
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

// target <- tau*source + (1-tau)*target, element-wise.
void soft_update(MlpParams& target, const MlpParams& source, double tau);

// Compares given analytic gradients against central differences of
// sum(output .* output_grad). Elements where both sides are below 1e-12
// contribute 0 (degenerate-denominator rule).
double gradient_relative_error(const MlpParams& params, const Matrix& input,
                               const Matrix& output_grad, double h,
                               const MlpGrads& param_grads, const Matrix& input_grad);

// Runs mlp_backward and checks it against central differences using a
// seeded random cotangent. Returns the max relative error.
double finite_diff_check(const MlpParams& params, const Matrix& input, double h);

// Checkpoint schema shared with the CLI: layer sizes, row-major weights,
// biases, activation names. nlohmann serializes doubles with full
// round-trip precision, so load(save(p)) is bit-exact.
std::string mlp_to_json(const MlpParams& params);
MlpParams mlp_from_json(const std::string& text);

}  // namespace usvswarm
