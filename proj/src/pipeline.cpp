#include "bootnet/pipeline.hpp"

#include <algorithm>
#include <set>

#include "bootnet/errors.hpp"
#include "bootnet/ops.hpp"
#include "bootnet/rng.hpp"

namespace bootnet {

void FinetuneConfig::validate() const {
    if (batch_size == 0) throw ValidationError("finetune: batch_size must be positive");
    if (!(eta > 0.0)) throw ValidationError("finetune: eta must be > 0");
    if (rounds == 0) throw ValidationError("finetune: rounds must be positive");
}

namespace {

// Output width of a group's last layer, recovered from parameter shapes.
std::size_t group_output_width(const ParamSet& params, const std::string& group) {
    std::size_t layer = 0;
    const Tensor* last = nullptr;
    for (;;) {
        const auto it = params.find(group + "." + std::to_string(layer) + ".W");
        if (it == params.end()) break;
        last = &it->second;
        ++layer;
    }
    if (last == nullptr) {
        throw ContractError("parameter set has no '" + group + "' group");
    }
    return last->cols();
}

void check_group_shapes(const ParamSet& pretrained, const std::string& group,
                        std::size_t in_dim, const std::vector<std::size_t>& dims) {
    std::size_t in = in_dim;
    for (std::size_t layer = 0; layer < dims.size(); ++layer) {
        const std::string w_name = group + "." + std::to_string(layer) + ".W";
        const auto it = pretrained.find(w_name);
        if (it == pretrained.end()) {
            throw ContractError("build_classifier: pretrained set lacks " + w_name);
        }
        if (it->second.rows() != in || it->second.cols() != dims[layer]) {
            throw ContractError("build_classifier: " + w_name + " has shape " +
                                it->second.shape_str() + ", spec wants [" +
                                std::to_string(in) + " x " + std::to_string(dims[layer]) +
                                "]");
        }
        in = dims[layer];
    }
}

Tensor flatten_batch(const Tensor& images) {
    const std::size_t n = images.rows();
    return images.reshaped({n, images.size() / n});
}

}  // namespace

ParamSet build_classifier(const ParamSet& pretrained, const NetworkSpec& spec,
                          std::uint64_t seed) {
    spec.validate();
    check_group_shapes(pretrained, "encoder", spec.input_dim, spec.encoder_dims);
    const bool attach_projection = spec.head_input == HeadInput::projection;
    if (attach_projection) {
        check_group_shapes(pretrained, "projector", spec.representation_dim(),
                           spec.projector_dims);
    }

    ParamSet out;
    for (const auto& [name, t] : group_subset(pretrained, "encoder")) out[name] = t;
    if (attach_projection) {
        for (const auto& [name, t] : group_subset(pretrained, "projector")) out[name] = t;
    }
    const std::size_t head_in =
        attach_projection ? spec.latent_dim() : spec.representation_dim();
    Rng root(seed);
    Rng head_rng = root.derive(3);
    init_group(out, "head", head_in, {spec.num_classes}, head_rng);
    return out;
}

std::pair<ParamSet, LossTrace> finetune(ParamSet params, const LabeledSet& data,
                                        const FinetuneConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw ValidationError("finetune: empty dataset");
    const std::size_t classes = group_output_width(params, "head");
    data.validate(classes);

    const std::size_t n = data.size();
    const Tensor flat = flatten_batch(data.images);
    const bool use_projector = has_group(params, "projector");

    LossTrace trace;
    Rng root(cfg.seed);
    std::uint64_t step = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng epoch_rng = root.derive(epoch);
        const std::vector<std::size_t> order = shuffled_indices(n, epoch_rng);
        for (std::size_t lo = 0; lo < n; lo += cfg.batch_size) {
            const std::size_t hi = std::min(n, lo + cfg.batch_size);
            std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                         order.begin() + static_cast<std::ptrdiff_t>(hi));
            Tensor x = gather_rows(flat, idx);
            std::vector<std::uint32_t> batch_labels;
            batch_labels.reserve(idx.size());
            for (std::size_t i : idx) batch_labels.push_back(data.labels[i]);
            const Tensor onehot = one_hot(batch_labels, classes);

            LeafMap leaves = make_leaves(params);
            NodePtr h = group_forward(leaves, "", "encoder", constant(x));
            if (use_projector) h = group_forward(leaves, "", "projector", h);
            NodePtr logits = group_forward(leaves, "", "head", h);
            NodePtr loss = cross_entropy_onehot(logits, onehot);
            GradMap grads = backward(loss);
            params = sgd_step(std::move(params), grads, cfg.eta);
            trace.entries.emplace_back(step++, loss->value[0]);
        }
    }
    return {std::move(params), std::move(trace)};
}

std::vector<PseudoExample> generate_pseudo_labels(const ParamSet& params,
                                                  const Tensor& unlabeled, std::size_t k) {
    if (k == 0) return {};
    if (unlabeled.empty() || unlabeled.ndim() != 4) {
        throw ValidationError("pseudo-labels: unlabeled pool must be N x H x W x C, got " +
                              unlabeled.shape_str());
    }
    const std::size_t pool = unlabeled.shape()[0];
    if (k > pool) {
        throw ValidationError("pseudo-labels: k " + std::to_string(k) +
                              " exceeds the pool of " + std::to_string(pool));
    }

    const Tensor probs = softmax_rows(logits_for(params, unlabeled));
    const std::size_t classes = probs.cols();
    std::vector<PseudoExample> all(pool);
    for (std::size_t i = 0; i < pool; ++i) {
        std::size_t arg = 0;
        double best = probs.at(i, 0);
        for (std::size_t c = 1; c < classes; ++c) {
            if (probs.at(i, c) > best) {
                best = probs.at(i, c);
                arg = c;
            }
        }
        all[i] = {i, static_cast<std::uint32_t>(arg), best};
    }
    std::sort(all.begin(), all.end(), [](const PseudoExample& a, const PseudoExample& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.index < b.index;
    });
    all.resize(k);
    return all;
}

LabeledSet merge_datasets(const LabeledSet& labeled, const Tensor& unlabeled,
                          const std::vector<PseudoExample>& pseudo) {
    if (pseudo.empty()) return labeled;
    const std::size_t pool = unlabeled.empty() ? 0 : unlabeled.shape()[0];
    std::set<std::size_t> seen;
    std::vector<std::size_t> idx;
    idx.reserve(pseudo.size());
    for (const PseudoExample& p : pseudo) {
        if (p.index >= pool) {
            throw ValidationError("merge: pseudo index " + std::to_string(p.index) +
                                  " outside the pool of " + std::to_string(pool));
        }
        if (!seen.insert(p.index).second) {
            throw ValidationError("merge: duplicate pseudo index " + std::to_string(p.index));
        }
        idx.push_back(p.index);
    }
    LabeledSet out;
    out.images = concat_rows(labeled.images, gather_rows(unlabeled, idx));
    out.labels = labeled.labels;
    out.labels.reserve(labeled.labels.size() + pseudo.size());
    for (const PseudoExample& p : pseudo) out.labels.push_back(p.assigned_label);
    return out;
}

EvalReport evaluate(const ParamSet& params, const LabeledSet& test) {
    if (test.empty()) throw ValidationError("evaluate: empty test set");
    const Tensor logits = logits_for(params, test.images);
    const std::size_t classes = logits.cols();
    test.validate(classes);

    EvalReport report;
    report.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        std::size_t arg = 0;
        double best = logits.at(i, 0);
        for (std::size_t c = 1; c < classes; ++c) {
            if (logits.at(i, c) > best) {
                best = logits.at(i, c);
                arg = c;
            }
        }
        const std::size_t truth = test.labels[i];
        report.confusion[truth][arg] += 1;
        if (truth == arg) ++hits;
    }
    report.accuracy = static_cast<double>(hits) / static_cast<double>(test.size());
    report.per_class_accuracy.assign(classes, 0.0);
    for (std::size_t c = 0; c < classes; ++c) {
        std::size_t row = 0;
        for (std::size_t p = 0; p < classes; ++p) row += report.confusion[c][p];
        if (row > 0) {
            report.per_class_accuracy[c] =
                static_cast<double>(report.confusion[c][c]) / static_cast<double>(row);
        }
    }
    return report;
}

std::size_t best_round(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw ContractError("best_round: no reports");
    std::size_t best = 0;
    for (std::size_t r = 1; r < reports.size(); ++r) {
        if (reports[r].accuracy > reports[best].accuracy) best = r;
    }
    return best;
}

std::pair<ParamSet, std::vector<EvalReport>> self_train(const ParamSet& pretrained,
                                                        const NetworkSpec& spec,
                                                        const LabeledSet& labeled,
                                                        const Tensor& unlabeled,
                                                        const LabeledSet& val,
                                                        const FinetuneConfig& cfg) {
    cfg.validate();
    if (val.empty()) throw ValidationError("self-train: empty validation set");

    ParamSet params = build_classifier(pretrained, spec, cfg.seed);
    std::vector<EvalReport> reports;
    ParamSet best_params;
    double best_acc = -1.0;
    for (std::size_t round = 0; round < cfg.rounds; ++round) {
        FinetuneConfig round_cfg = cfg;
        if (round > 0) round_cfg.seed = mix_seed(cfg.seed, round);
        LabeledSet train_set;
        if (round == 0) {
            train_set = labeled;
        } else {
            const std::vector<PseudoExample> pseudo =
                generate_pseudo_labels(params, unlabeled, cfg.pseudo_k);
            train_set = merge_datasets(labeled, unlabeled, pseudo);
        }
        auto [next, trace] = finetune(std::move(params), train_set, round_cfg);
        params = std::move(next);
        reports.push_back(evaluate(params, val));
        if (reports.back().accuracy > best_acc) {
            best_acc = reports.back().accuracy;
            best_params = params;
        }
    }
    return {std::move(best_params), std::move(reports)};
}

}  // namespace bootnet
