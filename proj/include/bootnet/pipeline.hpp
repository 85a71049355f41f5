#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bootnet/byol.hpp"
#include "bootnet/dataset.hpp"
#include "bootnet/network.hpp"
#include "bootnet/params.hpp"

namespace bootnet {

/// One unlabeled example picked for self-training: its index into the
/// pool, the predicted class, and the max softmax probability behind it.
struct PseudoExample {
    std::size_t index = 0;
    std::uint32_t assigned_label = 0;
    double confidence = 0.0;
};

struct FinetuneConfig {
    std::size_t epochs = 40;
    std::size_t batch_size = 64;
    double eta = 0.01;
    std::size_t pseudo_k = 200;
    std::size_t rounds = 3;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Test-set scoring: overall accuracy, one accuracy per class (0 when a
/// class has no examples), and confusion counts indexed [true][predicted].
struct EvalReport {
    double accuracy = 0.0;
    std::vector<double> per_class_accuracy;
    std::vector<std::vector<std::size_t>> confusion;
};

/// Classifier from a pretrained backbone: the encoder tensors (and the
/// projector tensors when the head attaches to the projection) are copied
/// bit-for-bit, the predictor is dropped, and a freshly seeded linear head
/// with num_classes outputs is appended.
ParamSet build_classifier(const ParamSet& pretrained, const NetworkSpec& spec,
                          std::uint64_t seed);

/// Supervised SGD on the mean cross-entropy of classify outputs against
/// one-hot labels. Seeded shuffle each epoch; the trailing partial batch
/// is kept. Returns updated params and the per-step loss trace.
std::pair<ParamSet, LossTrace> finetune(ParamSet params, const LabeledSet& data,
                                        const FinetuneConfig& cfg);

/// Classifies every pool image (no augmentation) and returns the k most
/// confident predictions, confidence descending. Ties break toward the
/// lower image index; argmax ties toward the lower class index.
std::vector<PseudoExample> generate_pseudo_labels(const ParamSet& params,
                                                  const Tensor& unlabeled, std::size_t k);

/// Labeled examples first and unchanged, then the pseudo-labeled pool
/// images carrying their assigned labels. Duplicate pool indices are
/// rejected.
LabeledSet merge_datasets(const LabeledSet& labeled, const Tensor& unlabeled,
                          const std::vector<PseudoExample>& pseudo);

/// The iterative loop: round 0 fine-tunes the freshly built classifier on
/// labeled data only; each later round pseudo-labels the pool with the
/// current model, merges, and fine-tunes again. Runs cfg.rounds rounds
/// total, scoring each on val; returns the parameters of the best round
/// (ties toward the earlier round) plus all per-round reports.
std::pair<ParamSet, std::vector<EvalReport>> self_train(const ParamSet& pretrained,
                                                        const NetworkSpec& spec,
                                                        const LabeledSet& labeled,
                                                        const Tensor& unlabeled,
                                                        const LabeledSet& val,
                                                        const FinetuneConfig& cfg);

/// Argmax-of-logits scoring (ties toward the lower class index).
EvalReport evaluate(const ParamSet& params, const LabeledSet& test);

/// Index of the best report: highest accuracy, ties toward the earlier one.
std::size_t best_round(const std::vector<EvalReport>& reports);

}  // namespace bootnet
