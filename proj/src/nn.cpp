#include "usvswarm/nn.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "usvswarm/nn_json.hpp"

namespace usvswarm {

Matrix Matrix::row(const std::vector<double>& v) {
    Matrix m(1, static_cast<int>(v.size()));
    m.data = v;
    return m;
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    throw std::logic_error("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::ReLU;
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw std::invalid_argument("unknown activation: " + name);
}

namespace {

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::ReLU: return x > 0.0 ? x : 0.0;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Identity: return x;
    }
    return x;
}

// Derivative expressed from the pre-activation z.
double activation_derivative(Activation a, double z) {
    switch (a) {
        case Activation::ReLU: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

// out = a * b^T where a is (n,k) and b is (m,k).
Matrix matmul_bt(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[static_cast<size_t>(i) * a.cols];
        double* orow = &out.data[static_cast<size_t>(i) * out.cols];
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[static_cast<size_t>(j) * b.cols];
            double acc = 0.0;
            for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            orow[j] = acc;
        }
    }
    return out;
}

// out = a * b where a is (n,k) and b is (k,m).
Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[static_cast<size_t>(i) * a.cols];
        double* orow = &out.data[static_cast<size_t>(i) * out.cols];
        for (int k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = &b.data[static_cast<size_t>(k) * b.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

// out = a^T * b where a is (k,n) and b is (k,m).
Matrix matmul_at(const Matrix& a, const Matrix& b) {
    Matrix out(a.cols, b.cols);
    for (int k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[static_cast<size_t>(k) * a.cols];
        const double* brow = &b.data[static_cast<size_t>(k) * b.cols];
        for (int i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* orow = &out.data[static_cast<size_t>(i) * out.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

}  // namespace

MlpParams mlp_init(const std::vector<int>& layer_sizes, Activation hidden,
                   Activation output, uint64_t seed) {
    if (layer_sizes.size() < 2) throw std::invalid_argument("mlp_init: need at least 2 layer sizes");
    for (int s : layer_sizes)
        if (s < 1) throw std::invalid_argument("mlp_init: layer sizes must be positive");

    MlpParams p;
    p.layer_sizes = layer_sizes;
    p.hidden_activation = hidden;
    p.output_activation = output;
    Rng rng(seed);
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        Matrix w(fan_out, fan_in);
        for (auto& x : w.data) x = rng.uniform(-bound, bound);
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(fan_out, 0.0);
    }
    return p;
}

AdamState adam_init(const MlpParams& params, double learning_rate) {
    AdamState s;
    s.learning_rate = learning_rate;
    for (size_t l = 0; l < params.layer_count(); ++l) {
        s.weight_m.emplace_back(params.weights[l].rows, params.weights[l].cols);
        s.weight_v.emplace_back(params.weights[l].rows, params.weights[l].cols);
        s.bias_m.emplace_back(params.biases[l].size(), 0.0);
        s.bias_v.emplace_back(params.biases[l].size(), 0.0);
    }
    return s;
}

Matrix mlp_forward(const MlpParams& params, const Matrix& input, ForwardCache* cache) {
    if (input.cols != params.input_size())
        throw std::invalid_argument("mlp_forward: input has " + std::to_string(input.cols) +
                                    " columns, expected " + std::to_string(params.input_size()));
    if (cache) {
        cache->input = input;
        cache->pre_activations.clear();
        cache->post_activations.clear();
    }
    Matrix act = input;
    const size_t n_layers = params.layer_count();
    for (size_t l = 0; l < n_layers; ++l) {
        Matrix z = matmul_bt(act, params.weights[l]);
        const auto& bias = params.biases[l];
        for (int i = 0; i < z.rows; ++i)
            for (int j = 0; j < z.cols; ++j) z.at(i, j) += bias[j];
        const Activation a = (l + 1 == n_layers) ? params.output_activation : params.hidden_activation;
        Matrix post = z;
        for (auto& x : post.data) x = apply_activation(a, x);
        if (cache) {
            cache->pre_activations.push_back(std::move(z));
            cache->post_activations.push_back(post);
        }
        act = std::move(post);
    }
    return act;
}

MlpGrads zero_grads(const MlpParams& params) {
    MlpGrads g;
    g.layer_sizes = params.layer_sizes;
    g.hidden_activation = params.hidden_activation;
    g.output_activation = params.output_activation;
    for (size_t l = 0; l < params.layer_count(); ++l) {
        g.weights.emplace_back(params.weights[l].rows, params.weights[l].cols);
        g.biases.emplace_back(params.biases[l].size(), 0.0);
    }
    return g;
}

MlpGrads mlp_backward(const MlpParams& params, const ForwardCache& cache,
                      const Matrix& output_grad, Matrix* input_grad) {
    const size_t n_layers = params.layer_count();
    if (cache.pre_activations.size() != n_layers)
        throw std::invalid_argument("mlp_backward: cache does not match parameters");
    if (output_grad.rows != cache.input.rows || output_grad.cols != params.output_size())
        throw std::invalid_argument("mlp_backward: output_grad shape mismatch");

    MlpGrads grads = zero_grads(params);
    Matrix delta = output_grad;
    for (size_t l = n_layers; l-- > 0;) {
        const Activation a = (l + 1 == n_layers) ? params.output_activation : params.hidden_activation;
        const Matrix& z = cache.pre_activations[l];
        for (size_t i = 0; i < delta.data.size(); ++i)
            delta.data[i] *= activation_derivative(a, z.data[i]);

        const Matrix& prev = (l == 0) ? cache.input : cache.post_activations[l - 1];
        grads.weights[l] = matmul_at(delta, prev);
        auto& db = grads.biases[l];
        for (int i = 0; i < delta.rows; ++i)
            for (int j = 0; j < delta.cols; ++j) db[j] += delta.at(i, j);

        if (l > 0 || input_grad) delta = matmul(delta, params.weights[l]);
    }
    if (input_grad) *input_grad = std::move(delta);
    return grads;
}

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
    for (size_t l = 0; l < params.layer_count(); ++l) {
        for (double g : grads.weights[l].data)
            if (!std::isfinite(g))
                throw std::runtime_error("adam_step: non-finite weight gradient in layer " + std::to_string(l));
        for (double g : grads.biases[l])
            if (!std::isfinite(g))
                throw std::runtime_error("adam_step: non-finite bias gradient in layer " + std::to_string(l));
    }
    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);

    auto update = [&](double& p, double g, double& m, double& v) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        const double mhat = m / bc1;
        const double vhat = v / bc2;
        p -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
    };

    for (size_t l = 0; l < params.layer_count(); ++l) {
        auto& w = params.weights[l].data;
        const auto& gw = grads.weights[l].data;
        auto& mw = state.weight_m[l].data;
        auto& vw = state.weight_v[l].data;
        for (size_t i = 0; i < w.size(); ++i) update(w[i], gw[i], mw[i], vw[i]);

        auto& b = params.biases[l];
        const auto& gb = grads.biases[l];
        auto& mb = state.bias_m[l];
        auto& vb = state.bias_v[l];
        for (size_t i = 0; i < b.size(); ++i) update(b[i], gb[i], mb[i], vb[i]);
    }
}

void soft_update(MlpParams& target, const MlpParams& source, double tau) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("soft_update: tau outside [0,1]");
    if (target.layer_sizes != source.layer_sizes)
        throw std::invalid_argument("soft_update: shape mismatch");
    for (size_t l = 0; l < target.layer_count(); ++l) {
        auto& tw = target.weights[l].data;
        const auto& sw = source.weights[l].data;
        for (size_t i = 0; i < tw.size(); ++i) tw[i] = tau * sw[i] + (1.0 - tau) * tw[i];
        auto& tb = target.biases[l];
        const auto& sb = source.biases[l];
        for (size_t i = 0; i < tb.size(); ++i) tb[i] = tau * sb[i] + (1.0 - tau) * tb[i];
    }
}

namespace {

// noise_floor is the unavoidable roundoff in the central difference itself
// (~eps*|loss|/2h); differences below it carry no signal about the analytic
// gradient, so they count as exact agreement.
double relative_error(double analytic, double numeric, double noise_floor) {
    if (std::abs(analytic - numeric) <= noise_floor) return 0.0;
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    if (scale < 1e-12) return 0.0;
    return std::abs(analytic - numeric) / scale;
}

double loss_at(const MlpParams& params, const Matrix& input, const Matrix& output_grad,
               ForwardCache* cache = nullptr) {
    Matrix out = mlp_forward(params, input, cache);
    double loss = 0.0;
    for (size_t i = 0; i < out.data.size(); ++i) loss += out.data[i] * output_grad.data[i];
    return loss;
}

// Central differences are meaningless across a ReLU kink: if the +h and -h
// evaluations disagree on any ReLU activation sign, the coordinate sits on a
// non-differentiable point and is excluded from the comparison.
bool same_relu_pattern(const MlpParams& params, const ForwardCache& a, const ForwardCache& b) {
    const size_t n_layers = params.layer_count();
    for (size_t l = 0; l < n_layers; ++l) {
        const Activation act =
            (l + 1 == n_layers) ? params.output_activation : params.hidden_activation;
        if (act != Activation::ReLU) continue;
        const auto& za = a.pre_activations[l].data;
        const auto& zb = b.pre_activations[l].data;
        for (size_t i = 0; i < za.size(); ++i)
            if ((za[i] > 0.0) != (zb[i] > 0.0)) return false;
    }
    return true;
}

}  // namespace

double gradient_relative_error(const MlpParams& params, const Matrix& input,
                               const Matrix& output_grad, double h,
                               const MlpGrads& param_grads, const Matrix& input_grad) {
    if (h <= 0.0) throw std::invalid_argument("gradient_relative_error: h must be > 0");
    double worst = 0.0;
    MlpParams p = params;
    ForwardCache cache_hi, cache_lo;
    auto probe = [&](double& x, double analytic) {
        const double saved = x;
        x = saved + h;
        const double hi = loss_at(p, input, output_grad, &cache_hi);
        x = saved - h;
        const double lo = loss_at(p, input, output_grad, &cache_lo);
        x = saved;
        if (!same_relu_pattern(p, cache_hi, cache_lo)) return;
        const double floor =
            32.0 * DBL_EPSILON * std::max(std::abs(hi), std::abs(lo)) / (2 * h);
        worst = std::max(worst, relative_error(analytic, (hi - lo) / (2 * h), floor));
    };
    for (size_t l = 0; l < p.layer_count(); ++l) {
        for (size_t i = 0; i < p.weights[l].data.size(); ++i)
            probe(p.weights[l].data[i], param_grads.weights[l].data[i]);
        for (size_t i = 0; i < p.biases[l].size(); ++i)
            probe(p.biases[l][i], param_grads.biases[l][i]);
    }
    Matrix in = input;
    for (size_t i = 0; i < in.data.size(); ++i) {
        const double saved = in.data[i];
        in.data[i] = saved + h;
        const double hi = loss_at(params, in, output_grad, &cache_hi);
        in.data[i] = saved - h;
        const double lo = loss_at(params, in, output_grad, &cache_lo);
        in.data[i] = saved;
        if (!same_relu_pattern(params, cache_hi, cache_lo)) continue;
        const double floor =
            32.0 * DBL_EPSILON * std::max(std::abs(hi), std::abs(lo)) / (2 * h);
        worst = std::max(worst, relative_error(input_grad.data[i], (hi - lo) / (2 * h), floor));
    }
    return worst;
}

double finite_diff_check(const MlpParams& params, const Matrix& input, double h) {
    Matrix output_grad(input.rows, params.output_size());
    Rng rng(0x9d0fc0ffeeULL);
    for (auto& x : output_grad.data) x = rng.uniform(-1.0, 1.0);

    ForwardCache cache;
    mlp_forward(params, input, &cache);
    Matrix input_grad;
    MlpGrads grads = mlp_backward(params, cache, output_grad, &input_grad);
    return gradient_relative_error(params, input, output_grad, h, grads, input_grad);
}

void to_json(nlohmann::json& j, const MlpParams& p) {
    j = nlohmann::json{
        {"layer_sizes", p.layer_sizes},
        {"hidden_activation", activation_name(p.hidden_activation)},
        {"output_activation", activation_name(p.output_activation)},
    };
    auto weights = nlohmann::json::array();
    for (const auto& w : p.weights) weights.push_back(w.data);
    j["weights"] = std::move(weights);
    auto biases = nlohmann::json::array();
    for (const auto& b : p.biases) biases.push_back(b);
    j["biases"] = std::move(biases);
}

void from_json(const nlohmann::json& j, MlpParams& p) {
    p = MlpParams{};
    j.at("layer_sizes").get_to(p.layer_sizes);
    p.hidden_activation = activation_from_name(j.at("hidden_activation").get<std::string>());
    p.output_activation = activation_from_name(j.at("output_activation").get<std::string>());
    if (p.layer_sizes.size() < 2) throw std::invalid_argument("MlpParams: need at least 2 layer sizes");
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    if (weights.size() != p.layer_sizes.size() - 1 || biases.size() != weights.size())
        throw std::invalid_argument("MlpParams: layer count mismatch");
    for (size_t l = 0; l + 1 < p.layer_sizes.size(); ++l) {
        Matrix w(p.layer_sizes[l + 1], p.layer_sizes[l]);
        weights[l].get_to(w.data);
        if (w.data.size() != static_cast<size_t>(w.rows) * w.cols)
            throw std::invalid_argument("MlpParams: weight shape mismatch in layer " + std::to_string(l));
        p.weights.push_back(std::move(w));
        std::vector<double> b;
        biases[l].get_to(b);
        if (b.size() != static_cast<size_t>(p.layer_sizes[l + 1]))
            throw std::invalid_argument("MlpParams: bias shape mismatch in layer " + std::to_string(l));
        p.biases.push_back(std::move(b));
    }
}

void to_json(nlohmann::json& j, const AdamState& s) {
    j = nlohmann::json{
        {"step_count", s.step_count},
        {"learning_rate", s.learning_rate},
        {"beta1", s.beta1},
        {"beta2", s.beta2},
        {"epsilon", s.epsilon},
    };
    auto wm = nlohmann::json::array(), wv = nlohmann::json::array();
    for (const auto& m : s.weight_m) wm.push_back(m.data);
    for (const auto& v : s.weight_v) wv.push_back(v.data);
    j["weight_m"] = std::move(wm);
    j["weight_v"] = std::move(wv);
    j["bias_m"] = s.bias_m;
    j["bias_v"] = s.bias_v;
}

// Moment shapes are restored against the paired network when loading a
// checkpoint; see adam_state_from_json.
AdamState adam_state_from_json(const nlohmann::json& j, const MlpParams& params) {
    AdamState s = adam_init(params, j.at("learning_rate").get<double>());
    s.step_count = j.at("step_count").get<uint64_t>();
    s.beta1 = j.at("beta1").get<double>();
    s.beta2 = j.at("beta2").get<double>();
    s.epsilon = j.at("epsilon").get<double>();
    const auto& wm = j.at("weight_m");
    const auto& wv = j.at("weight_v");
    for (size_t l = 0; l < s.weight_m.size(); ++l) {
        wm[l].get_to(s.weight_m[l].data);
        wv[l].get_to(s.weight_v[l].data);
    }
    j.at("bias_m").get_to(s.bias_m);
    j.at("bias_v").get_to(s.bias_v);
    return s;
}

std::string mlp_to_json(const MlpParams& params) {
    nlohmann::json j = params;
    return j.dump();
}

MlpParams mlp_from_json(const std::string& text) {
    return nlohmann::json::parse(text).get<MlpParams>();
}

}  // namespace usvswarm
