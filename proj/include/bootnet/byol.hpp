#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bootnet/augment.hpp"
#include "bootnet/network.hpp"

namespace bootnet {

struct PretrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    double eta = 0.1;
    double tau = 0.99995;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-step (step index, loss value) records.
struct LossTrace {
    std::vector<std::pair<std::uint64_t, double>> entries;
};

/// Mean over the batch of || q/||q|| - z/||z|| ||^2 == 2 - 2 cos(q, z).
/// Rows are pairs; the value lies in [0, 4].
double pair_loss(const Tensor& q_out, const Tensor& z_target);

/// Graph form. The target side is sealed behind a stop-gradient barrier
/// here, so no gradient ever reaches it.
NodePtr pair_loss_node(const NodePtr& q_out, const NodePtr& z_target);

/// The two-view objective: pair_loss(v through online, v' through target)
/// plus the same with the views swapped. Value in [0, 8].
double symmetric_loss(const TrainState& state, const Tensor& v, const Tensor& v_prime);

/// Loss value plus gradients of every online parameter ("online." keys).
/// Target parameters sit behind the barrier and never get an entry.
struct StepGrads {
    double loss = 0.0;
    GradMap grads;
};
StepGrads symmetric_loss_grads(const TrainState& state, const Tensor& v,
                               const Tensor& v_prime);

/// One optimization step over a raw image batch [B x H x W x C]: make a
/// view pair per image, take the SGD step on the online network with eta,
/// then move the target by EMA with tau. Returns the new state and the
/// loss at the pre-update parameters.
std::pair<TrainState, double> pretrain_step(TrainState state, const Tensor& x_batch,
                                            const AugmentationConfig& cfg, Rng& rng);

/// Full pretraining loop over unlabeled images [N x H x W x C]: seeded
/// shuffle each epoch, fixed-size batches with the trailing partial batch
/// dropped. Returns the final train state (online and target networks)
/// and the loss trace.
std::pair<TrainState, LossTrace> pretrain(const Tensor& images, const NetworkSpec& spec,
                                          const PretrainConfig& pcfg,
                                          const AugmentationConfig& acfg);

}  // namespace bootnet
