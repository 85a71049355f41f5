#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bootnet/commands.hpp"
#include "bootnet/config.hpp"
#include "bootnet/errors.hpp"

namespace {

std::string default_checkpoint(const bootnet::ExperimentConfig& cfg, const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BYOL pretraining and pseudo-label self-training on synthetic shape images"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string checkpoint_path;
    std::uint64_t seed = 0;
    bool deterministic = false;

    app.add_option("--config", config_path, "config file (TOML)");
    app.add_option("--out", out_dir, "output directory, overriding the config's out_dir");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "override every seed in the config");
    app.add_flag("--deterministic", deterministic,
                 "emit byte-stable outputs (wall-clock columns zeroed)");

    CLI::App* synth = app.add_subcommand("synth", "generate the synthetic dataset");
    CLI::App* pretrain = app.add_subcommand("pretrain", "self-supervised pretraining");
    CLI::App* selftrain =
        app.add_subcommand("selftrain", "pseudo-label fine-tuning from a pretrain checkpoint");
    CLI::App* eval = app.add_subcommand("eval", "score a classifier checkpoint on the test split");
    CLI::App* grid = app.add_subcommand("gridsearch", "two-stage hyperparameter sweep");
    for (CLI::App* sub : {synth, pretrain, selftrain, eval, grid}) sub->fallthrough();

    selftrain->add_option("--checkpoint", checkpoint_path,
                          "pretrain checkpoint (default <out>/checkpoint.ckpt)");
    eval->add_option("--checkpoint", checkpoint_path,
                     "classifier checkpoint (default <out>/model.ckpt)");

    CLI11_PARSE(app, argc, argv);

    try {
        bootnet::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = bootnet::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_opt->count() > 0) bootnet::override_seed(cfg, seed);
        if (deterministic) cfg.deterministic = true;
        cfg.validate();

        if (synth->parsed()) return bootnet::cmd_synth(cfg);
        if (pretrain->parsed()) return bootnet::cmd_pretrain(cfg);
        if (selftrain->parsed()) {
            const std::string path = checkpoint_path.empty()
                                         ? default_checkpoint(cfg, "checkpoint.ckpt")
                                         : checkpoint_path;
            return bootnet::cmd_selftrain(cfg, path);
        }
        if (eval->parsed()) {
            const std::string path = checkpoint_path.empty()
                                         ? default_checkpoint(cfg, "model.ckpt")
                                         : checkpoint_path;
            return bootnet::cmd_eval(cfg, path);
        }
        if (grid->parsed()) return bootnet::cmd_gridsearch(cfg);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const bootnet::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bootnet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
