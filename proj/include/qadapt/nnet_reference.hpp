#pragma once
#include <utility>
#include <vector>

#include "qadapt/nnet.hpp"

namespace qadapt::ref {

// Plain serial implementations of the network math, written independently of
// the kernels in nnet.cpp. Tests pin the optimized path against these, and
// the bench target times the two side by side. Accumulation order matches,
// so agreement is exact, not approximate.

std::vector<double> forward(const NetParams& net, const std::vector<double>& input);

// Returns (grads, loss) for the mean-squared-error loss.
std::pair<NetGrads, double> backward_mse(const NetParams& net, const std::vector<double>& input,
                                         const std::vector<double>& target);

}  // namespace qadapt::ref
