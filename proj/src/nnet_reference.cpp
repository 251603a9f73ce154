#include "qadapt/nnet_reference.hpp"

#include <stdexcept>

namespace qadapt::ref {

namespace {

struct Trace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;
};

Trace run_forward(const NetParams& net, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != net.input_dim())
        throw std::invalid_argument("ref::forward: input size mismatch");
    Trace t;
    std::vector<double> x = input;
    for (int l = 0; l < net.layers(); ++l) {
        const int in = net.dims[l], out = net.dims[l + 1];
        std::vector<double> pre(out), post(out);
        for (int r = 0; r < out; ++r) {
            double acc = net.b[l][r];
            for (int c = 0; c < in; ++c) acc += net.w[l][static_cast<std::size_t>(r) * in + c] * x[c];
            pre[r] = acc;
            post[r] = (l == net.layers() - 1) ? acc : (acc > 0.0 ? acc : 0.0);
        }
        t.pre.push_back(pre);
        t.post.push_back(post);
        x = post;
    }
    return t;
}

}  // namespace

std::vector<double> forward(const NetParams& net, const std::vector<double>& input) {
    return run_forward(net, input).post.back();
}

std::pair<NetGrads, double> backward_mse(const NetParams& net, const std::vector<double>& input,
                                         const std::vector<double>& target) {
    const Trace t = run_forward(net, input);
    const int L = net.layers();
    const int n_out = net.output_dim();
    if (static_cast<int>(target.size()) != n_out)
        throw std::invalid_argument("ref::backward_mse: target size mismatch");

    double loss = 0.0;
    std::vector<double> delta(n_out);
    for (int i = 0; i < n_out; ++i) {
        const double d = t.post[L - 1][i] - target[i];
        loss += d * d;
        delta[i] = 2.0 * d / n_out;
    }
    loss /= n_out;

    NetGrads g;
    g.match_shape(net);
    for (int l = L - 1; l >= 0; --l) {
        const int in = net.dims[l], out = net.dims[l + 1];
        const std::vector<double>& x = (l == 0) ? input : t.post[l - 1];
        for (int r = 0; r < out; ++r) {
            for (int c = 0; c < in; ++c) g.w[l][static_cast<std::size_t>(r) * in + c] = delta[r] * x[c];
            g.b[l][r] = delta[r];
        }
        if (l > 0) {
            std::vector<double> prev(in, 0.0);
            for (int c = 0; c < in; ++c) {
                if (t.pre[l - 1][c] <= 0.0) continue;
                double acc = 0.0;
                for (int r = 0; r < out; ++r)
                    acc += net.w[l][static_cast<std::size_t>(r) * in + c] * delta[r];
                prev[c] = acc;
            }
            delta = prev;
        }
    }
    return {std::move(g), loss};
}

}  // namespace qadapt::ref
