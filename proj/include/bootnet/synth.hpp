#pragma once

#include <cstdint>
#include <string>

#include "bootnet/dataset.hpp"
#include "bootnet/tensor.hpp"

namespace bootnet {

/// Controls for the generated shape corpus.
struct SynthConfig {
    std::size_t num_classes = 4;
    std::size_t per_class = 400;
    std::size_t image_size = 16;
    double labeled_fraction = 0.05;
    double noise = 0.45;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One generated corpus cut into index-disjoint splits. `unlabeled` is an
/// empty tensor when labeled_fraction is 1.
struct DatasetBundle {
    LabeledSet labeled;
    Tensor unlabeled;
    LabeledSet val;
    LabeledSet test;
    std::size_t num_classes = 0;
    std::size_t image_size = 0;

    void validate() const;
};

/// Renders grayscale images of per-class parametric shapes (disk, ring,
/// bar, cross, checker, gradient) with randomized position, scale and
/// rotation plus pixel noise, then splits 70/10/20 into train/val/test
/// and cuts the train portion into labeled/unlabeled. Deterministic in
/// cfg.seed.
DatasetBundle synth_generate(const SynthConfig& cfg);

/// Writes the bundle into `dir` as tensor/label files plus manifest.json.
/// Returns the manifest path.
std::string save_bundle(const std::string& dir, const DatasetBundle& bundle);

/// Reads a bundle from any directory holding a manifest.json that names
/// tensor-format image files and label files.
DatasetBundle load_bundle(const std::string& dir);

}  // namespace bootnet
