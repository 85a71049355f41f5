#pragma once

#include <utility>

#include "bootnet/rng.hpp"
#include "bootnet/tensor.hpp"

namespace bootnet {

/// Strengths of the stochastic view transforms. The all-neutral setting
/// (crop 1, flip 0, brightness 0, contrast (1,1), noise 0) is an exact
/// identity on every input.
struct AugmentationConfig {
    double crop_min_fraction = 0.6;   // in (0, 1]: minimum retained area
    double flip_probability = 0.5;    // in [0, 1]
    double brightness_delta = 0.2;    // shift drawn from [-d, +d]
    double contrast_low = 0.8;        // scale drawn from [low, high]
    double contrast_high = 1.2;
    double noise_sigma = 0.25;        // additive Gaussian sigma

    static AugmentationConfig neutral();
    void validate() const;
};

/// One stochastic view of an HxWxC image with pixel values in [0, 1].
/// Applies, in order: random area crop + bilinear resize back, horizontal
/// flip, brightness shift, contrast scale about the image mean, additive
/// Gaussian noise; then clamps to [0, 1]. Shape is preserved.
Tensor augment(const Tensor& x, const AugmentationConfig& cfg, Rng& rng);

/// Two independent views of the same image drawn from disjoint streams.
std::pair<Tensor, Tensor> make_view_pair(const Tensor& x, const AugmentationConfig& cfg,
                                         Rng& rng);

}  // namespace bootnet
