#include "qadapt/nnet.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "qadapt/rng.hpp"

namespace qadapt {

namespace {
// Kernels below parallelize across output rows (or input columns for the
// transposed pass). Each element is a private accumulation in fixed index
// order, so results are bit-identical for any thread count.
constexpr int kOmpRowThreshold = 256;
}  // namespace

std::size_t NetParams::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < w.size(); ++l) n += w[l].size() + b[l].size();
    return n;
}

void NetGrads::match_shape(const NetParams& net) {
    w.resize(net.w.size());
    b.resize(net.b.size());
    for (std::size_t l = 0; l < net.w.size(); ++l) {
        w[l].assign(net.w[l].size(), 0.0);
        b[l].assign(net.b[l].size(), 0.0);
    }
}

void NetWorkspace::match_shape(const NetParams& net) {
    const int L = net.layers();
    pre.resize(L);
    post.resize(L);
    delta.resize(L);
    for (int l = 0; l < L; ++l) {
        pre[l].assign(net.dims[l + 1], 0.0);
        post[l].assign(net.dims[l + 1], 0.0);
        delta[l].assign(net.dims[l + 1], 0.0);
    }
    input.assign(net.dims[0], 0.0);
}

NetParams init_network(std::vector<int> dims, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("init_network: need at least two layer dims");
    for (int d : dims)
        if (d <= 0) throw std::invalid_argument("init_network: layer dims must be positive");

    NetParams net;
    net.dims = std::move(dims);
    Rng rng = derive_rng(seed, stream::kInit);
    const int L = net.layers();
    net.w.resize(L);
    net.b.resize(L);
    for (int l = 0; l < L; ++l) {
        const int in = net.dims[l], out = net.dims[l + 1];
        const double k = 1.0 / std::sqrt(static_cast<double>(in));
        net.w[l].resize(static_cast<std::size_t>(out) * in);
        for (double& v : net.w[l]) v = uniform(rng, -k, k);
        net.b[l].assign(out, 0.0);
    }
    return net;
}

void forward(const NetParams& net, std::span<const double> input, NetWorkspace& ws) {
    assert(static_cast<int>(input.size()) == net.input_dim());
    ws.match_shape(net);
    std::memcpy(ws.input.data(), input.data(), input.size() * sizeof(double));

    const int L = net.layers();
    const double* x = ws.input.data();
    for (int l = 0; l < L; ++l) {
        const int in = net.dims[l], out = net.dims[l + 1];
        const double* W = net.w[l].data();
        const double* B = net.b[l].data();
        double* pre = ws.pre[l].data();
        double* post = ws.post[l].data();
        const bool last = (l == L - 1);
#pragma omp parallel for schedule(static) if (out >= kOmpRowThreshold)
        for (int r = 0; r < out; ++r) {
            const double* row = W + static_cast<std::size_t>(r) * in;
            double acc = B[r];
            for (int c = 0; c < in; ++c) acc += row[c] * x[c];
            pre[r] = acc;
            post[r] = (last || acc > 0.0) ? acc : 0.0;
        }
        x = post;
    }
}

std::vector<double> forward(const NetParams& net, std::span<const double> input) {
    NetWorkspace ws;
    forward(net, input, ws);
    return ws.output();
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
    assert(pred.size() == target.size() && !pred.empty());
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        s += d * d;
    }
    return s / static_cast<double>(pred.size());
}

double backward_mse(const NetParams& net, std::span<const double> input,
                    std::span<const double> target, NetGrads& grads, NetWorkspace& ws) {
    forward(net, input, ws);
    return backward_from_forward(net, target, grads, ws);
}

double backward_from_forward(const NetParams& net, std::span<const double> target, NetGrads& grads,
                             NetWorkspace& ws) {
    assert(static_cast<int>(target.size()) == net.output_dim());
    grads.match_shape(net);

    const int L = net.layers();
    const std::vector<double>& out = ws.post[L - 1];
    const double scale = 2.0 / static_cast<double>(net.output_dim());
    for (int i = 0; i < net.output_dim(); ++i)
        ws.delta[L - 1][i] = scale * (out[i] - target[i]);

    for (int l = L - 1; l >= 0; --l) {
        const int in = net.dims[l], nout = net.dims[l + 1];
        const double* x = (l == 0) ? ws.input.data() : ws.post[l - 1].data();
        const double* d = ws.delta[l].data();
        double* gw = grads.w[l].data();
        double* gb = grads.b[l].data();
#pragma omp parallel for schedule(static) if (nout >= kOmpRowThreshold)
        for (int r = 0; r < nout; ++r) {
            double* grow = gw + static_cast<std::size_t>(r) * in;
            const double dr = d[r];
            for (int c = 0; c < in; ++c) grow[c] = dr * x[c];
            gb[r] = dr;
        }
        if (l > 0) {
            const double* W = net.w[l].data();
            const double* pre = ws.pre[l - 1].data();
            double* dprev = ws.delta[l - 1].data();
#pragma omp parallel for schedule(static) if (in >= kOmpRowThreshold)
            for (int c = 0; c < in; ++c) {
                if (pre[c] <= 0.0) {  // ReLU gate, derivative 0 at the kink
                    dprev[c] = 0.0;
                    continue;
                }
                double acc = 0.0;
                for (int r = 0; r < nout; ++r)
                    acc += W[static_cast<std::size_t>(r) * in + c] * d[r];
                dprev[c] = acc;
            }
        }
    }
    return mse_loss(out, target);
}

void sgd_step(NetParams& net, const NetGrads& grads, double lr) {
    assert(net.w.size() == grads.w.size());
    for (std::size_t l = 0; l < net.w.size(); ++l) {
        assert(net.w[l].size() == grads.w[l].size());
        double* W = net.w[l].data();
        const double* G = grads.w[l].data();
        const std::size_t n = net.w[l].size();
#pragma omp parallel for schedule(static) if (n >= 4096)
        for (std::size_t i = 0; i < n; ++i) W[i] -= lr * G[i];
        for (std::size_t i = 0; i < net.b[l].size(); ++i) net.b[l][i] -= lr * grads.b[l][i];
    }
}

bool same_shape(const NetParams& a, const NetParams& b) { return a.dims == b.dims; }

}  // namespace qadapt
