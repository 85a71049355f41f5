#include "bootnet/gridsearch.hpp"

#include "bootnet/errors.hpp"

namespace bootnet {

StageOneResult select_epochs_eta(const std::vector<std::size_t>& epochs_list,
                                 const std::vector<double>& eta_list,
                                 const CellEvaluator& evaluate) {
    if (epochs_list.empty() || eta_list.empty()) {
        throw ValidationError("grid selection: empty hyperparameter list");
    }
    StageOneResult out;
    out.matrix.assign(eta_list.size(), std::vector<double>(epochs_list.size(), 0.0));
    bool have = false;
    for (std::size_t r = 0; r < eta_list.size(); ++r) {
        for (std::size_t c = 0; c < epochs_list.size(); ++c) {
            const double acc = evaluate(epochs_list[c], eta_list[r]);
            out.matrix[r][c] = acc;
            const bool better =
                !have || acc > out.best_accuracy ||
                (acc == out.best_accuracy &&
                 (epochs_list[c] < out.best_epochs ||
                  (epochs_list[c] == out.best_epochs && eta_list[r] < out.best_eta)));
            if (better) {
                have = true;
                out.best_accuracy = acc;
                out.best_epochs = epochs_list[c];
                out.best_eta = eta_list[r];
            }
        }
    }
    return out;
}

StageTwoResult select_pseudo_k(const std::vector<std::size_t>& pseudo_k_list,
                               const KEvaluator& evaluate) {
    if (pseudo_k_list.empty()) {
        throw ValidationError("grid selection: empty pseudo_k list");
    }
    StageTwoResult out;
    out.accuracies.reserve(pseudo_k_list.size());
    bool have = false;
    for (std::size_t k : pseudo_k_list) {
        const double acc = evaluate(k);
        out.accuracies.push_back(acc);
        const bool better = !have || acc > out.best_accuracy ||
                            (acc == out.best_accuracy && k < out.best_k);
        if (better) {
            have = true;
            out.best_accuracy = acc;
            out.best_k = k;
        }
    }
    return out;
}

}  // namespace bootnet
