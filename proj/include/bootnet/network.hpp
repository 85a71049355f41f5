#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bootnet/graph.hpp"
#include "bootnet/params.hpp"
#include "bootnet/rng.hpp"

namespace bootnet {

/// Where the classification head attaches: the encoder representation y
/// (default) or the projector output z.
enum class HeadInput { representation, projection };

/// Layer widths for encoder f, projector g, predictor q and the head.
struct NetworkSpec {
    std::size_t input_dim = 256;
    std::vector<std::size_t> encoder_dims = {128, 64};  // ends with d_y
    std::vector<std::size_t> projector_dims = {32};     // ends with d_z
    std::vector<std::size_t> predictor_dims = {32};     // d_z -> ... -> d_z
    std::size_t num_classes = 4;
    HeadInput head_input = HeadInput::representation;

    std::size_t representation_dim() const { return encoder_dims.back(); }
    std::size_t latent_dim() const { return projector_dims.back(); }
    void validate() const;
};

/// Fan-in-scaled Gaussian weights, zero biases, for the encoder, projector
/// and predictor groups. Deterministic under the seed.
ParamSet init_params(const NetworkSpec& spec, std::uint64_t seed);

/// Adds one MLP group: layer l maps the running width to dims[l], weights
/// scaled by 1/sqrt(fan_in), biases zero. Used for every group's init.
void init_group(ParamSet& params, const std::string& group, std::size_t in_dim,
                const std::vector<std::size_t>& dims, Rng& rng);

bool has_group(const ParamSet& params, const std::string& group);
/// The subset of entries whose names start with "<group>.".
ParamSet group_subset(const ParamSet& params, const std::string& group);

// ---- forward passes (values only; no gradients retained) ----

/// Encoder representation y = f(v); relu between layers, none after the last.
Tensor encode(const ParamSet& params, const Tensor& v);
/// Projector latent z = g(y).
Tensor project(const ParamSet& params, const Tensor& y);
/// Predictor output q(z). Online-side only; errors if the group is absent.
Tensor predict_latent(const ParamSet& params, const Tensor& z);
/// Raw head logits from the representation y. Applies the projector first
/// when the ParamSet carries one (projection-attached head).
Tensor classify(const ParamSet& params, const Tensor& y);
/// encode + classify on flattened [B x input_dim] rows.
Tensor logits_for(const ParamSet& params, const Tensor& images);

// ---- graph building (training passes) ----

using LeafMap = std::map<std::string, NodePtr>;

/// One named leaf per parameter; names get `prefix` prepended.
LeafMap make_leaves(const ParamSet& params, const std::string& prefix = "");
/// MLP forward over the layers of `group`, reusing leaves from `leaves`.
NodePtr group_forward(const LeafMap& leaves, const std::string& prefix,
                      const std::string& group, const NodePtr& input);

// ---- train state ----

/// Online parameters (encoder+projector+predictor), EMA target parameters
/// (encoder+projector), decay tau, learning rate eta, step counter.
struct TrainState {
    ParamSet online;
    ParamSet target;
    double tau = 0.99;
    double eta = 0.05;
    std::uint64_t step = 0;

    void validate() const;
};

/// Fresh state: online from init_params(seed); target an exact copy of the
/// online encoder and projector groups.
TrainState make_train_state(const NetworkSpec& spec, double tau, double eta,
                            std::uint64_t seed);

/// target <- tau * target + (1 - tau) * online, elementwise per shared
/// tensor; the online set is untouched.
TrainState ema_update(TrainState state);

}  // namespace bootnet
