#include "bootnet/network.hpp"

#include <cmath>

#include "bootnet/errors.hpp"
#include "bootnet/ops.hpp"

namespace bootnet {

void NetworkSpec::validate() const {
    if (input_dim == 0) throw ValidationError("spec: input_dim must be positive");
    if (encoder_dims.empty()) throw ValidationError("spec: encoder needs at least one layer");
    if (projector_dims.empty()) throw ValidationError("spec: projector needs at least one layer");
    if (predictor_dims.empty()) throw ValidationError("spec: predictor needs at least one layer");
    if (num_classes == 0) throw ValidationError("spec: num_classes must be positive");
    for (std::size_t d : encoder_dims) {
        if (d == 0) throw ValidationError("spec: zero encoder width");
    }
    for (std::size_t d : projector_dims) {
        if (d == 0) throw ValidationError("spec: zero projector width");
    }
    for (std::size_t d : predictor_dims) {
        if (d == 0) throw ValidationError("spec: zero predictor width");
    }
    if (predictor_dims.back() != projector_dims.back()) {
        throw ValidationError("spec: predictor output width " +
                              std::to_string(predictor_dims.back()) +
                              " must equal projector output width " +
                              std::to_string(projector_dims.back()));
    }
}

namespace {

std::string layer_name(const std::string& group, std::size_t layer, const char* kind) {
    return group + "." + std::to_string(layer) + "." + kind;
}

}  // namespace

void init_group(ParamSet& params, const std::string& group, std::size_t in_dim,
                const std::vector<std::size_t>& dims, Rng& rng) {
    std::size_t in = in_dim;
    for (std::size_t layer = 0; layer < dims.size(); ++layer) {
        const std::size_t out = dims[layer];
        Tensor w({in, out});
        const double scale = 1.0 / std::sqrt(static_cast<double>(in));
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = scale * rng.normal();
        params[layer_name(group, layer, "W")] = std::move(w);
        params[layer_name(group, layer, "b")] = Tensor({out});
        in = out;
    }
}

ParamSet init_params(const NetworkSpec& spec, std::uint64_t seed) {
    spec.validate();
    ParamSet params;
    Rng root(seed);
    Rng enc = root.derive(0), proj = root.derive(1), pred = root.derive(2);
    init_group(params, "encoder", spec.input_dim, spec.encoder_dims, enc);
    init_group(params, "projector", spec.representation_dim(), spec.projector_dims, proj);
    init_group(params, "predictor", spec.latent_dim(), spec.predictor_dims, pred);
    return params;
}

bool has_group(const ParamSet& params, const std::string& group) {
    return params.count(group + ".0.W") > 0;
}

ParamSet group_subset(const ParamSet& params, const std::string& group) {
    ParamSet out;
    const std::string prefix = group + ".";
    for (const auto& [name, t] : params) {
        if (name.rfind(prefix, 0) == 0) out[name] = t;
    }
    return out;
}

LeafMap make_leaves(const ParamSet& params, const std::string& prefix) {
    LeafMap leaves;
    for (const auto& [name, t] : params) {
        leaves[prefix + name] = parameter(t, prefix + name);
    }
    return leaves;
}

NodePtr group_forward(const LeafMap& leaves, const std::string& prefix,
                      const std::string& group, const NodePtr& input) {
    NodePtr x = input;
    std::size_t layer = 0;
    for (;;) {
        const auto wit = leaves.find(prefix + layer_name(group, layer, "W"));
        if (wit == leaves.end()) break;
        const auto bit = leaves.find(prefix + layer_name(group, layer, "b"));
        if (bit == leaves.end()) {
            throw ContractError("missing bias for " + prefix + layer_name(group, layer, "W"));
        }
        if (layer > 0) x = relu(x);
        x = add_rowvec(matmul(x, wit->second), bit->second);
        ++layer;
    }
    if (layer == 0) {
        throw ContractError("parameter set has no '" + group + "' group");
    }
    return x;
}

namespace {

Tensor run_group(const ParamSet& params, const std::string& group, const Tensor& input) {
    if (input.ndim() != 2) {
        throw ShapeError(group + " forward: expected 2-d batch, got " + input.shape_str());
    }
    const std::size_t w_in = params.count(group + ".0.W")
                                 ? params.at(group + ".0.W").rows()
                                 : 0;
    if (w_in != 0 && input.cols() != w_in) {
        throw ShapeError(group + " forward: input width " + std::to_string(input.cols()) +
                         " does not match layer width " + std::to_string(w_in));
    }
    LeafMap leaves = make_leaves(params);
    return group_forward(leaves, "", group, constant(input))->value;
}

}  // namespace

Tensor encode(const ParamSet& params, const Tensor& v) { return run_group(params, "encoder", v); }

Tensor project(const ParamSet& params, const Tensor& y) {
    return run_group(params, "projector", y);
}

Tensor predict_latent(const ParamSet& params, const Tensor& z) {
    if (!has_group(params, "predictor")) {
        throw ContractError("predict_latent: parameter set has no predictor group");
    }
    return run_group(params, "predictor", z);
}

Tensor classify(const ParamSet& params, const Tensor& y) {
    if (!has_group(params, "head")) {
        throw ContractError("classify: parameter set has no head group");
    }
    Tensor h = has_group(params, "projector") ? project(params, y) : y;
    return run_group(params, "head", h);
}

Tensor logits_for(const ParamSet& params, const Tensor& images) {
    const std::size_t n = images.rows();
    const Tensor flat = images.reshaped({n, images.size() / n});
    return classify(params, encode(params, flat));
}

void TrainState::validate() const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("state: tau must be in [0, 1]");
    if (!(eta > 0.0)) throw ValidationError("state: eta must be > 0");
}

TrainState make_train_state(const NetworkSpec& spec, double tau, double eta,
                            std::uint64_t seed) {
    TrainState state;
    state.online = init_params(spec, seed);
    for (const std::string group : {"encoder", "projector"}) {
        for (auto& [name, t] : group_subset(state.online, group)) {
            state.target[name] = t;
        }
    }
    state.tau = tau;
    state.eta = eta;
    state.step = 0;
    state.validate();
    return state;
}

TrainState ema_update(TrainState state) {
    state.validate();
    for (auto& [name, t] : state.target) {
        const auto it = state.online.find(name);
        if (it == state.online.end()) {
            throw ContractError("ema_update: target parameter '" + name +
                                "' has no online counterpart");
        }
        const Tensor& online = it->second;
        if (!online.same_shape(t)) {
            throw ContractError("ema_update: shape mismatch for '" + name + "': " +
                                online.shape_str() + " vs " + t.shape_str());
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            t[i] = state.tau * t[i] + (1.0 - state.tau) * online[i];
        }
    }
    return state;
}

}  // namespace bootnet
