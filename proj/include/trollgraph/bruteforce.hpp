#pragma once

#include <functional>
#include <vector>

#include "trollgraph/crf.hpp"

namespace trollgraph::bruteforce {

// Exhaustive enumeration of all 9*42^R (or 9*3^R without strategy) joint
// states. Slow by design; the oracle infer_exact is checked against.
InferenceResult infer(const SnippetGraph& graph);

// Central finite differences of a black-box scalar function.
std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    double step = 1e-5);

}  // namespace trollgraph::bruteforce
