#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace qadapt {

// Fully connected net, float64 everywhere. Hidden layers ReLU, output linear.
// w[l] is (dims[l+1] x dims[l]) row-major, one row per output neuron.
struct NetParams {
    std::vector<int> dims;
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;

    int input_dim() const { return dims.front(); }
    int output_dim() const { return dims.back(); }
    int layers() const { return static_cast<int>(dims.size()) - 1; }
    std::size_t parameter_count() const;
};

struct NetGrads {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;

    void match_shape(const NetParams& net);
};

// Reusable buffers for the forward/backward passes on one sample.
struct NetWorkspace {
    std::vector<std::vector<double>> pre;    // pre-activation per non-input layer
    std::vector<std::vector<double>> post;   // activation per non-input layer
    std::vector<std::vector<double>> delta;  // backprop error per non-input layer
    std::vector<double> input;

    void match_shape(const NetParams& net);
    const std::vector<double>& output() const { return post.back(); }
};

// Weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)) drawn layer by layer in
// row-major order; biases zero. Same seed, same dims -> identical parameters.
NetParams init_network(std::vector<int> dims, std::uint64_t seed);

void forward(const NetParams& net, std::span<const double> input, NetWorkspace& ws);
std::vector<double> forward(const NetParams& net, std::span<const double> input);

// Loss is the mean over output coordinates of the squared error.
double mse_loss(std::span<const double> pred, std::span<const double> target);

// Gradients of mse_loss w.r.t. every weight and bias; returns the loss.
double backward_mse(const NetParams& net, std::span<const double> input,
                    std::span<const double> target, NetGrads& grads, NetWorkspace& ws);

// Backward pass reusing the forward results already in ws; equivalent to the
// tail of backward_mse when ws was just filled by forward() on the same net.
double backward_from_forward(const NetParams& net, std::span<const double> target, NetGrads& grads,
                             NetWorkspace& ws);

void sgd_step(NetParams& net, const NetGrads& grads, double lr);

bool same_shape(const NetParams& a, const NetParams& b);

}  // namespace qadapt
