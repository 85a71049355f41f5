#pragma once

#include <functional>
#include <map>
#include <string>

#include "bootnet/graph.hpp"
#include "bootnet/params.hpp"

namespace bootnet {

/// Result of comparing reverse-mode gradients against central differences.
struct GradReport {
    double max_rel_error = 0.0;
    std::map<std::string, double> per_parameter;
};

/// A scalar loss as a function of parameters. The returned node's graph
/// must bind named leaves to the entries of the given ParamSet.
using ScalarFn = std::function<NodePtr(const ParamSet&)>;

/// Central-difference check of every entry of every parameter.
/// rel error = |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
GradReport grad_check(const ScalarFn& fn, const ParamSet& params, double step = 1e-5);

}  // namespace bootnet
