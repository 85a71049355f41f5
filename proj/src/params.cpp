#include "bootnet/params.hpp"

#include "bootnet/errors.hpp"

namespace bootnet {

bool shape_congruent(const ParamSet& a, const ParamSet& b) {
    if (a.size() != b.size()) return false;
    auto it = b.begin();
    for (const auto& [name, t] : a) {
        if (it->first != name || !it->second.same_shape(t)) return false;
        ++it;
    }
    return true;
}

ParamSet sgd_step(ParamSet params, const GradMap& grads, double eta) {
    if (eta <= 0.0) {
        throw ValidationError("sgd_step: eta must be > 0, got " + std::to_string(eta));
    }
    for (auto& [name, p] : params) {
        auto it = grads.find(name);
        if (it == grads.end()) {
            throw ContractError("sgd_step: missing gradient for parameter '" + name + "'");
        }
        const Tensor& g = it->second;
        if (!g.same_shape(p)) {
            throw ContractError("sgd_step: gradient shape " + g.shape_str() +
                                " does not match parameter '" + name + "' " + p.shape_str());
        }
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= eta * g[i];
    }
    return params;
}

}  // namespace bootnet
