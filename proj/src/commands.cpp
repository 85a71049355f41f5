#include "bootnet/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "json.hpp"

#include "bootnet/checkpoint.hpp"
#include "bootnet/errors.hpp"
#include "bootnet/gridsearch.hpp"
#include "bootnet/pipeline.hpp"
#include "bootnet/synth.hpp"

namespace bootnet {

namespace {

std::string join(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
    if (ec) throw IoError("cannot create directory for " + path + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("failed writing " + path);
}

// Shortest decimal text that parses back to exactly v.
std::string fmt(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

Tensor train_images(const DatasetBundle& bundle) {
    if (bundle.unlabeled.empty()) return bundle.labeled.images;
    return concat_rows(bundle.labeled.images, bundle.unlabeled);
}

std::size_t pool_size(const DatasetBundle& bundle) {
    return bundle.unlabeled.empty() ? 0 : bundle.unlabeled.shape()[0];
}

// A pseudo_k tuned for a large corpus can exceed a toy pool; cap with a
// note instead of failing the whole run.
std::size_t capped_pseudo_k(std::size_t requested, std::size_t pool) {
    if (requested > pool) {
        std::cout << "note: pseudo_k " << requested << " capped to the unlabeled pool of "
                  << pool << "\n";
        return pool;
    }
    return requested;
}

nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["out_dir"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    j["deterministic"] = cfg.deterministic;
    j["data"] = {{"num_classes", cfg.data.num_classes},
                 {"per_class", cfg.data.per_class},
                 {"image_size", cfg.data.image_size},
                 {"labeled_fraction", cfg.data.labeled_fraction},
                 {"noise", cfg.data.noise},
                 {"seed", cfg.data.seed}};
    j["pretrain"] = {{"epochs", cfg.pretrain.epochs},
                     {"batch_size", cfg.pretrain.batch_size},
                     {"eta", cfg.pretrain.eta},
                     {"tau", cfg.pretrain.tau},
                     {"seed", cfg.pretrain.seed}};
    j["finetune"] = {{"epochs", cfg.finetune.epochs},
                     {"batch_size", cfg.finetune.batch_size},
                     {"eta", cfg.finetune.eta},
                     {"pseudo_k", cfg.finetune.pseudo_k},
                     {"rounds", cfg.finetune.rounds},
                     {"seed", cfg.finetune.seed}};
    return j;
}

nlohmann::ordered_json report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["accuracy"] = report.accuracy;
    j["per_class_accuracy"] = report.per_class_accuracy;
    j["confusion"] = report.confusion;
    return j;
}

}  // namespace

std::string dataset_dir(const ExperimentConfig& cfg) { return join(cfg.out_dir, "data"); }

int cmd_synth(const ExperimentConfig& cfg) {
    const DatasetBundle bundle = synth_generate(cfg.data);
    const std::string manifest = save_bundle(dataset_dir(cfg), bundle);
    std::cout << "wrote " << manifest << " (labeled " << bundle.labeled.size()
              << ", unlabeled " << pool_size(bundle) << ", val " << bundle.val.size()
              << ", test " << bundle.test.size() << ")\n";
    return 0;
}

int cmd_pretrain(const ExperimentConfig& cfg) {
    const DatasetBundle bundle = load_bundle(dataset_dir(cfg));
    auto [state, trace] = pretrain(train_images(bundle), cfg.model, cfg.pretrain, cfg.augment);

    const std::string ckpt_path = join(cfg.out_dir, "checkpoint.ckpt");
    save_checkpoint(ckpt_path, tag_train_groups(state.online, state.target));

    std::string csv = "step,loss\n";
    for (const auto& [step, loss] : trace.entries) {
        csv += std::to_string(step) + "," + fmt(loss) + "\n";
    }
    write_text(join(cfg.out_dir, "pretrain_loss.csv"), csv);

    std::cout << "wrote " << ckpt_path << " after " << trace.entries.size() << " steps\n";
    return 0;
}

int cmd_selftrain(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
    const DatasetBundle bundle = load_bundle(dataset_dir(cfg));
    const ParamSet tagged = load_checkpoint(checkpoint_path);
    const ParamSet online = untag_group(tagged, "online.");
    if (online.empty()) {
        throw ContractError("selftrain: " + checkpoint_path +
                            " holds no online network; expected a pretrain checkpoint");
    }

    FinetuneConfig fcfg = cfg.finetune;
    fcfg.pseudo_k = capped_pseudo_k(fcfg.pseudo_k, pool_size(bundle));
    auto [model, reports] =
        self_train(online, cfg.model, bundle.labeled, bundle.unlabeled, bundle.val, fcfg);

    const std::string model_path = join(cfg.out_dir, "model.ckpt");
    save_checkpoint(model_path, model);

    std::string csv = "round,split,accuracy\n";
    for (std::size_t r = 0; r < reports.size(); ++r) {
        csv += std::to_string(r) + ",val," + fmt(reports[r].accuracy) + "\n";
    }
    write_text(join(cfg.out_dir, "rounds.csv"), csv);

    const std::size_t best = best_round(reports);
    nlohmann::ordered_json summary;
    summary["best_round"] = best;
    summary["accuracy"] = reports[best].accuracy;
    summary["rounds"] = reports.size();
    summary["pseudo_k"] = fcfg.pseudo_k;
    summary["config"] = config_echo(cfg);
    write_text(join(cfg.out_dir, "summary.json"), summary.dump(2) + "\n");

    std::cout << "wrote " << model_path << "; best round " << best << " at val accuracy "
              << fmt(reports[best].accuracy) << "\n";
    return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
    const DatasetBundle bundle = load_bundle(dataset_dir(cfg));
    const ParamSet params = load_checkpoint(checkpoint_path);
    const EvalReport report = evaluate(params, bundle.test);

    const std::string text = report_json(report).dump(2) + "\n";
    write_text(join(cfg.out_dir, "eval.json"), text);
    std::cout << text;
    return 0;
}

int cmd_gridsearch(const ExperimentConfig& cfg) {
    const DatasetBundle bundle = load_bundle(dataset_dir(cfg));
    auto [state, trace] = pretrain(train_images(bundle), cfg.model, cfg.pretrain, cfg.augment);
    const ParamSet backbone = state.online;
    const std::size_t pool = pool_size(bundle);

    auto run_cell = [&](std::size_t epochs, double eta, std::size_t pseudo_k) {
        FinetuneConfig fcfg = cfg.finetune;
        fcfg.epochs = epochs;
        fcfg.eta = eta;
        fcfg.pseudo_k = capped_pseudo_k(pseudo_k, pool);
        auto [model, reports] =
            self_train(backbone, cfg.model, bundle.labeled, bundle.unlabeled, bundle.val, fcfg);
        return reports[best_round(reports)].accuracy;
    };

    std::map<std::size_t, double> column_seconds;
    const StageOneResult s1 =
        select_epochs_eta(cfg.grid.epochs_list, cfg.grid.eta_list,
                          [&](std::size_t epochs, double eta) {
                              const auto t0 = std::chrono::steady_clock::now();
                              const double acc = run_cell(epochs, eta, cfg.finetune.pseudo_k);
                              const auto t1 = std::chrono::steady_clock::now();
                              column_seconds[epochs] +=
                                  std::chrono::duration<double>(t1 - t0).count();
                              std::cout << "grid: epochs " << epochs << ", eta " << fmt(eta)
                                        << " -> val accuracy " << fmt(acc) << "\n";
                              return acc;
                          });

    std::string csv = "eta/epochs";
    for (std::size_t e : cfg.grid.epochs_list) csv += "," + std::to_string(e);
    csv += "\n";
    for (std::size_t r = 0; r < cfg.grid.eta_list.size(); ++r) {
        csv += fmt(cfg.grid.eta_list[r]);
        for (std::size_t c = 0; c < cfg.grid.epochs_list.size(); ++c) {
            csv += "," + fmt(s1.matrix[r][c]);
        }
        csv += "\n";
    }
    csv += "time_seconds";
    for (std::size_t e : cfg.grid.epochs_list) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", cfg.deterministic ? 0.0 : column_seconds[e]);
        csv += std::string(",") + buf;
    }
    csv += "\n";
    write_text(join(cfg.out_dir, "grid.csv"), csv);

    const StageTwoResult s2 =
        select_pseudo_k(cfg.grid.pseudo_k_list, [&](std::size_t k) {
            const double acc = run_cell(s1.best_epochs, s1.best_eta, k);
            std::cout << "grid: pseudo_k " << k << " -> val accuracy " << fmt(acc) << "\n";
            return acc;
        });

    nlohmann::ordered_json best;
    best["best_epochs"] = s1.best_epochs;
    best["best_eta"] = s1.best_eta;
    best["stage1_accuracy"] = s1.best_accuracy;
    best["pseudo_k_list"] = cfg.grid.pseudo_k_list;
    best["pseudo_k_accuracies"] = s2.accuracies;
    best["best_pseudo_k"] = s2.best_k;
    best["stage2_accuracy"] = s2.best_accuracy;
    write_text(join(cfg.out_dir, "best.json"), best.dump(2) + "\n");

    std::cout << "best cell: epochs " << s1.best_epochs << ", eta " << fmt(s1.best_eta)
              << ", pseudo_k " << s2.best_k << "\n";
    return 0;
}

}  // namespace bootnet
