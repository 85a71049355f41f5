#pragma once

#include <map>
#include <string>

#include "bootnet/tensor.hpp"

namespace bootnet {

/// Named collection of trainable tensors. std::map keeps iteration order
/// deterministic, which the EMA law, checkpoints, and seeded runs rely on.
using ParamSet = std::map<std::string, Tensor>;

using GradMap = std::map<std::string, Tensor>;

/// Same keys and same per-key shapes.
bool shape_congruent(const ParamSet& a, const ParamSet& b);

/// p <- p - eta * g for every parameter. Every key of `params` must have a
/// gradient entry of matching shape.
ParamSet sgd_step(ParamSet params, const GradMap& grads, double eta);

}  // namespace bootnet
