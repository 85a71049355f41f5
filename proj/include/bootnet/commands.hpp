#pragma once

#include <string>

#include "bootnet/config.hpp"

namespace bootnet {

/// Directory holding the dataset files for a run: <out_dir>/data.
std::string dataset_dir(const ExperimentConfig& cfg);

/// Generates the synthetic bundle and writes it under dataset_dir plus a
/// manifest.json.
int cmd_synth(const ExperimentConfig& cfg);

/// Self-supervised pretraining over the train images; writes
/// checkpoint.ckpt (online and target groups) and pretrain_loss.csv.
int cmd_pretrain(const ExperimentConfig& cfg);

/// Iterative pseudo-label fine-tuning from a pretrain checkpoint; writes
/// model.ckpt, rounds.csv and summary.json.
int cmd_selftrain(const ExperimentConfig& cfg, const std::string& checkpoint_path);

/// Scores a classifier checkpoint on the test split; prints and writes
/// eval.json.
int cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path);

/// Two-stage sweep: epochs x eta first, then pseudo_k at the winning
/// cell; writes grid.csv (accuracy matrix plus a wall-clock row) and
/// best.json.
int cmd_gridsearch(const ExperimentConfig& cfg);

}  // namespace bootnet
