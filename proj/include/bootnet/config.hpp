#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bootnet/augment.hpp"
#include "bootnet/byol.hpp"
#include "bootnet/network.hpp"
#include "bootnet/pipeline.hpp"
#include "bootnet/synth.hpp"

namespace bootnet {

/// Hyperparameter lists for the two-stage sweep: stage one crosses
/// epochs x eta, stage two scans pseudo_k at the winning cell.
struct GridSpec {
    std::vector<std::size_t> epochs_list = {5, 15};
    std::vector<double> eta_list = {0.2, 0.05};
    std::vector<std::size_t> pseudo_k_list = {0, 50};

    void validate() const;
};

/// Everything one run needs, mirroring the config file sections
/// [data] [model] [augment] [pretrain] [finetune] [grid] plus the
/// top-level out_dir, seed and deterministic switches.
struct ExperimentConfig {
    SynthConfig data;
    NetworkSpec model;
    AugmentationConfig augment;
    PretrainConfig pretrain;
    FinetuneConfig finetune;
    GridSpec grid;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool deterministic = false;

    void validate() const;
};

/// Parses the TOML subset used by the config files: sections, `key =
/// value` lines, comments, strings, booleans, integers, floats and flat
/// numeric arrays. Unknown sections or keys are rejected. A top-level
/// `seed` fills every section seed that the file does not set itself;
/// absent [model] input_dim / num_classes follow the [data] geometry.
ExperimentConfig parse_config(const std::string& text, const std::string& source);

/// parse_config over the contents of `path`.
ExperimentConfig load_config(const std::string& path);

/// Replaces the global seed and every per-section seed (the command-line
/// override outranks the file).
void override_seed(ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace bootnet
