#include "bootnet/byol.hpp"

#include "bootnet/errors.hpp"
#include "bootnet/ops.hpp"

namespace bootnet {

void PretrainConfig::validate() const {
    if (batch_size == 0) throw ValidationError("pretrain: batch_size must be positive");
    if (!(eta > 0.0)) throw ValidationError("pretrain: eta must be > 0");
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("pretrain: tau must be in [0, 1]");
}

NodePtr pair_loss_node(const NodePtr& q_out, const NodePtr& z_target) {
    if (!q_out->value.same_shape(z_target->value)) {
        throw ShapeError("pair_loss: shape mismatch " + q_out->value.shape_str() + " vs " +
                         z_target->value.shape_str());
    }
    if (q_out->value.ndim() != 2) {
        throw ShapeError("pair_loss: expected 2-d batches, got " + q_out->value.shape_str());
    }
    const std::size_t batch = q_out->value.rows();
    NodePtr qn = l2_normalize_rows(q_out);
    NodePtr zn = l2_normalize_rows(stop_grad(z_target));
    NodePtr cosines = row_dot(qn, zn);
    // mean of (2 - 2 cos) == 2 - (2/B) * sum(cos)
    return affine(sum(cosines), -2.0 / static_cast<double>(batch), 2.0);
}

double pair_loss(const Tensor& q_out, const Tensor& z_target) {
    return pair_loss_node(constant(q_out), constant(z_target))->value[0];
}

namespace {

struct LossGraph {
    NodePtr loss;
};

// Online path q(g(f(v))) against barriered target path g'(f'(v')), both
// directions, using one shared set of leaves per side so gradients from
// both directions accumulate onto the same parameters.
LossGraph build_symmetric_loss(const LeafMap& online_leaves, const LeafMap& target_leaves,
                               const Tensor& v, const Tensor& v_prime) {
    if (!v.same_shape(v_prime)) {
        throw ShapeError("symmetric_loss: view shapes differ, " + v.shape_str() + " vs " +
                         v_prime.shape_str());
    }
    auto online_q = [&](const Tensor& view) {
        NodePtr y = group_forward(online_leaves, "online.", "encoder", constant(view));
        NodePtr z = group_forward(online_leaves, "online.", "projector", y);
        NodePtr q = group_forward(online_leaves, "online.", "predictor", z);
        return q;
    };
    auto target_z = [&](const Tensor& view) {
        NodePtr y = group_forward(target_leaves, "target.", "encoder", constant(view));
        NodePtr z = group_forward(target_leaves, "target.", "projector", y);
        return z;
    };
    NodePtr forward_term = pair_loss_node(online_q(v), target_z(v_prime));
    NodePtr swapped_term = pair_loss_node(online_q(v_prime), target_z(v));
    return {add(forward_term, swapped_term)};
}

}  // namespace

double symmetric_loss(const TrainState& state, const Tensor& v, const Tensor& v_prime) {
    LeafMap online_leaves = make_leaves(state.online, "online.");
    LeafMap target_leaves = make_leaves(state.target, "target.");
    return build_symmetric_loss(online_leaves, target_leaves, v, v_prime).loss->value[0];
}

StepGrads symmetric_loss_grads(const TrainState& state, const Tensor& v,
                               const Tensor& v_prime) {
    LeafMap online_leaves = make_leaves(state.online, "online.");
    LeafMap target_leaves = make_leaves(state.target, "target.");
    LossGraph graph = build_symmetric_loss(online_leaves, target_leaves, v, v_prime);
    StepGrads out;
    out.loss = graph.loss->value[0];
    out.grads = backward(graph.loss);
    return out;
}

std::pair<TrainState, double> pretrain_step(TrainState state, const Tensor& x_batch,
                                            const AugmentationConfig& cfg, Rng& rng) {
    state.validate();
    if (x_batch.ndim() != 4) {
        throw ShapeError("pretrain_step: expected BxHxWxC batch, got " + x_batch.shape_str());
    }
    const std::size_t batch = x_batch.shape()[0];
    const std::size_t pixels = x_batch.size() / batch;

    Tensor v({batch, pixels});
    Tensor v_prime({batch, pixels});
    for (std::size_t i = 0; i < batch; ++i) {
        Rng image_rng = rng.derive(i);
        const Tensor image = x_batch.slice_rows(i, i + 1).reshaped(
            {x_batch.shape()[1], x_batch.shape()[2], x_batch.shape()[3]});
        auto [a, b] = make_view_pair(image, cfg, image_rng);
        for (std::size_t j = 0; j < pixels; ++j) {
            v[i * pixels + j] = a[j];
            v_prime[i * pixels + j] = b[j];
        }
    }

    StepGrads sg = symmetric_loss_grads(state, v, v_prime);

    GradMap online_grads;
    for (auto& [name, g] : sg.grads) {
        if (name.rfind("online.", 0) == 0) {
            online_grads[name.substr(7)] = std::move(g);
        }
    }
    state.online = sgd_step(std::move(state.online), online_grads, state.eta);
    state = ema_update(std::move(state));
    ++state.step;
    return {std::move(state), sg.loss};
}

std::pair<TrainState, LossTrace> pretrain(const Tensor& images, const NetworkSpec& spec,
                                          const PretrainConfig& pcfg,
                                          const AugmentationConfig& acfg) {
    pcfg.validate();
    acfg.validate();
    spec.validate();
    if (images.ndim() != 4) {
        throw ShapeError("pretrain: expected NxHxWxC images, got " + images.shape_str());
    }
    const std::size_t n = images.shape()[0];
    if (n == 0) throw ValidationError("pretrain: empty dataset");
    if (n < pcfg.batch_size) {
        throw ValidationError("pretrain: dataset of " + std::to_string(n) +
                              " images is smaller than batch size " +
                              std::to_string(pcfg.batch_size));
    }
    const std::size_t flat = images.size() / n;
    if (flat != spec.input_dim) {
        throw ShapeError("pretrain: image pixels " + std::to_string(flat) +
                         " do not match spec input_dim " + std::to_string(spec.input_dim));
    }

    TrainState state = make_train_state(spec, pcfg.tau, pcfg.eta, pcfg.seed);
    LossTrace trace;
    Rng root(pcfg.seed);
    const std::size_t batches = n / pcfg.batch_size;
    for (std::size_t epoch = 0; epoch < pcfg.epochs; ++epoch) {
        Rng epoch_rng = root.derive(epoch);
        Rng shuffle_rng = epoch_rng.derive(0);
        const std::vector<std::size_t> order = shuffled_indices(n, shuffle_rng);
        for (std::size_t b = 0; b < batches; ++b) {
            std::vector<std::size_t> batch_idx(
                order.begin() + static_cast<std::ptrdiff_t>(b * pcfg.batch_size),
                order.begin() + static_cast<std::ptrdiff_t>((b + 1) * pcfg.batch_size));
            Tensor x_batch = gather_rows(images, batch_idx);
            Rng step_rng = epoch_rng.derive(1 + b);
            auto [next, loss] = pretrain_step(std::move(state), x_batch, acfg, step_rng);
            state = std::move(next);
            trace.entries.emplace_back(state.step - 1, loss);
        }
    }
    return {std::move(state), std::move(trace)};
}

}  // namespace bootnet
