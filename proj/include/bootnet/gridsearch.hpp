#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bootnet {

/// Accuracy of a run at (epochs, eta); supplied by the caller so the
/// selection rule can be exercised against stub matrices.
using CellEvaluator = std::function<double(std::size_t epochs, double eta)>;
using KEvaluator = std::function<double(std::size_t pseudo_k)>;

struct StageOneResult {
    std::size_t best_epochs = 0;
    double best_eta = 0.0;
    double best_accuracy = 0.0;
    /// matrix[r][c] = accuracy at eta_list[r], epochs_list[c].
    std::vector<std::vector<double>> matrix;
};

struct StageTwoResult {
    std::size_t best_k = 0;
    double best_accuracy = 0.0;
    std::vector<double> accuracies;  // aligned with the input list
};

/// Evaluates every (epochs, eta) cell and picks the accuracy argmax;
/// ties go to fewer epochs, then to smaller eta, regardless of list
/// order. Lists must be nonempty.
StageOneResult select_epochs_eta(const std::vector<std::size_t>& epochs_list,
                                 const std::vector<double>& eta_list,
                                 const CellEvaluator& evaluate);

/// Evaluates every pseudo-label count and picks the accuracy argmax;
/// ties go to the smaller count.
StageTwoResult select_pseudo_k(const std::vector<std::size_t>& pseudo_k_list,
                               const KEvaluator& evaluate);

}  // namespace bootnet
