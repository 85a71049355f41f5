#include "bootnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "bootnet/errors.hpp"
#include "bootnet/rng.hpp"
#include "bootnet/tensor_io.hpp"

namespace bootnet {

namespace {

constexpr std::size_t kShapeFamilySize = 6;

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

/// Soft inside/outside step on a signed distance: 1 well inside, 0 well
/// outside, linear over a band of width `edge`.
double soft_step(double signed_distance, double edge) {
    return clamp01(0.5 - signed_distance / edge);
}

/// Shape stencil in the unit frame, 1 on the figure and 0 off it.
double stencil(std::size_t cls, double x, double y, double edge) {
    const double r = std::hypot(x, y);
    switch (cls) {
        case 0:  // disk
            return soft_step(r - 0.55, edge);
        case 1:  // ring
            return soft_step(std::abs(r - 0.52) - 0.17, edge);
        case 2:  // bar
            return soft_step(std::max(std::abs(y) - 0.17, std::abs(x) - 0.85), edge);
        case 3: {  // cross
            const double horiz = std::max(std::abs(y) - 0.15, std::abs(x) - 0.8);
            const double vert = std::max(std::abs(x) - 0.15, std::abs(y) - 0.8);
            return soft_step(std::min(horiz, vert), edge);
        }
        case 4: {  // checker
            const double cell = 0.45;
            const long long px = static_cast<long long>(std::floor(x / cell));
            const long long py = static_cast<long long>(std::floor(y / cell));
            return ((px + py) & 1) ? 1.0 : 0.0;
        }
        case 5:  // gradient ramp along the rotated axis
            return clamp01(0.5 + 0.7 * x);
        default:
            throw ContractError("stencil: class out of family range");
    }
}

void render_image(double* out, std::size_t side, std::size_t cls, double noise, Rng& rng) {
    const double cx = rng.uniform(-0.22, 0.22);
    const double cy = rng.uniform(-0.22, 0.22);
    const double scale = rng.uniform(0.75, 1.25);
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    const double edge = 2.4 / static_cast<double>(side);

    for (std::size_t row = 0; row < side; ++row) {
        for (std::size_t col = 0; col < side; ++col) {
            const double x = (static_cast<double>(col) + 0.5) / static_cast<double>(side) * 2.0 - 1.0;
            const double y = (static_cast<double>(row) + 0.5) / static_cast<double>(side) * 2.0 - 1.0;
            const double dx = x - cx;
            const double dy = y - cy;
            const double xr = (cphi * dx + sphi * dy) / scale;
            const double yr = (-sphi * dx + cphi * dy) / scale;
            double v = 0.1 + 0.8 * stencil(cls, xr, yr, edge);
            if (noise > 0.0) v += noise * rng.normal();
            out[row * side + col] = clamp01(v);
        }
    }
}

LabeledSet take_labeled(const Tensor& images, const std::vector<std::uint32_t>& labels,
                        const std::vector<std::size_t>& order, std::size_t begin,
                        std::size_t end) {
    std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                 order.begin() + static_cast<std::ptrdiff_t>(end));
    LabeledSet set;
    set.images = gather_rows(images, idx);
    set.labels.reserve(idx.size());
    for (std::size_t i : idx) set.labels.push_back(labels[i]);
    return set;
}

}  // namespace

void SynthConfig::validate() const {
    if (num_classes < 2) throw ValidationError("synth: num_classes must be >= 2");
    if (num_classes > kShapeFamilySize) {
        throw ValidationError("synth: num_classes " + std::to_string(num_classes) +
                              " exceeds the shape family size " +
                              std::to_string(kShapeFamilySize));
    }
    if (per_class == 0) throw ValidationError("synth: per_class must be positive");
    if (image_size < 4) throw ValidationError("synth: image_size must be >= 4");
    if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0)) {
        throw ValidationError("synth: labeled_fraction must lie in (0, 1]");
    }
    if (!(noise >= 0.0)) throw ValidationError("synth: noise must be >= 0");
}

void LabeledSet::validate(std::size_t num_classes) const {
    if (images.ndim() != 4) {
        throw ValidationError("labeled set: images must be N x H x W x C, got " +
                              images.shape_str());
    }
    if (images.shape()[0] != labels.size()) {
        throw ValidationError("labeled set: " + std::to_string(images.shape()[0]) +
                              " images vs " + std::to_string(labels.size()) + " labels");
    }
    for (std::uint32_t l : labels) {
        if (l >= num_classes) {
            throw ValidationError("labeled set: label " + std::to_string(l) +
                                  " out of range for " + std::to_string(num_classes) +
                                  " classes");
        }
    }
}

void DatasetBundle::validate() const {
    if (num_classes == 0) throw ValidationError("bundle: num_classes unset");
    labeled.validate(num_classes);
    val.validate(num_classes);
    test.validate(num_classes);
    if (labeled.empty()) throw ValidationError("bundle: labeled split is empty");
    if (val.empty() || test.empty()) throw ValidationError("bundle: val/test split is empty");
    if (!unlabeled.empty() && unlabeled.ndim() != 4) {
        throw ValidationError("bundle: unlabeled images must be N x H x W x C, got " +
                              unlabeled.shape_str());
    }
}

DatasetBundle synth_generate(const SynthConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.num_classes * cfg.per_class;
    const std::size_t side = cfg.image_size;

    Tensor images({n, side, side, 1});
    std::vector<std::uint32_t> labels(n);
    Rng root(cfg.seed);
    Rng render_root = root.derive(0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cls = i / cfg.per_class;
        labels[i] = static_cast<std::uint32_t>(cls);
        Rng image_rng = render_root.derive(i);
        render_image(images.data() + i * side * side, side, cls, cfg.noise, image_rng);
    }

    Rng split_rng = root.derive(1);
    const std::vector<std::size_t> order = shuffled_indices(n, split_rng);
    const std::size_t n_train = n * 70 / 100;
    const std::size_t n_val = n * 10 / 100;
    const std::size_t n_test = n - n_train - n_val;
    if (n_train == 0 || n_val == 0 || n_test == 0) {
        throw ValidationError("synth: corpus of " + std::to_string(n) +
                              " images is too small to split 70/10/20");
    }
    std::size_t n_labeled =
        static_cast<std::size_t>(std::llround(cfg.labeled_fraction * static_cast<double>(n_train)));
    if (n_labeled == 0) n_labeled = 1;
    if (n_labeled > n_train) n_labeled = n_train;

    DatasetBundle bundle;
    bundle.num_classes = cfg.num_classes;
    bundle.image_size = side;
    bundle.labeled = take_labeled(images, labels, order, 0, n_labeled);
    if (n_labeled < n_train) {
        std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(n_labeled),
                                     order.begin() + static_cast<std::ptrdiff_t>(n_train));
        bundle.unlabeled = gather_rows(images, idx);
    }
    bundle.val = take_labeled(images, labels, order, n_train, n_train + n_val);
    bundle.test = take_labeled(images, labels, order, n_train + n_val, n);
    return bundle;
}

std::string save_bundle(const std::string& dir, const DatasetBundle& bundle) {
    bundle.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
    auto at = [&dir](const char* name) {
        return (std::filesystem::path(dir) / name).string();
    };

    nlohmann::ordered_json files;
    save_tensor(at("labeled_images.tnsr"), bundle.labeled.images);
    save_labels(at("labeled_labels.lbls"), bundle.labeled.labels);
    files["labeled_images"] = "labeled_images.tnsr";
    files["labeled_labels"] = "labeled_labels.lbls";
    if (!bundle.unlabeled.empty()) {
        save_tensor(at("unlabeled_images.tnsr"), bundle.unlabeled);
        files["unlabeled_images"] = "unlabeled_images.tnsr";
    }
    save_tensor(at("val_images.tnsr"), bundle.val.images);
    save_labels(at("val_labels.lbls"), bundle.val.labels);
    files["val_images"] = "val_images.tnsr";
    files["val_labels"] = "val_labels.lbls";
    save_tensor(at("test_images.tnsr"), bundle.test.images);
    save_labels(at("test_labels.lbls"), bundle.test.labels);
    files["test_images"] = "test_images.tnsr";
    files["test_labels"] = "test_labels.lbls";

    nlohmann::ordered_json manifest;
    manifest["num_classes"] = bundle.num_classes;
    manifest["image_size"] = bundle.image_size;
    manifest["files"] = files;
    manifest["counts"] = {{"labeled", bundle.labeled.size()},
                          {"unlabeled", bundle.unlabeled.empty() ? 0 : bundle.unlabeled.shape()[0]},
                          {"val", bundle.val.size()},
                          {"test", bundle.test.size()}};

    const std::string manifest_path = at("manifest.json");
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + manifest_path);
    out << manifest.dump(2) << "\n";
    if (!out) throw IoError("failed writing " + manifest_path);
    return manifest_path;
}

DatasetBundle load_bundle(const std::string& dir) {
    const std::string manifest_path = (std::filesystem::path(dir) / "manifest.json").string();
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + manifest_path);
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed manifest " + manifest_path + ": " + e.what());
    }

    auto at = [&dir, &manifest, &manifest_path](const char* key) {
        if (!manifest["files"].contains(key)) {
            throw IoError("manifest " + manifest_path + " lacks file entry '" + key + "'");
        }
        return (std::filesystem::path(dir) /
                manifest["files"][key].get<std::string>()).string();
    };

    DatasetBundle bundle;
    bundle.num_classes = manifest.value("num_classes", std::size_t{0});
    bundle.image_size = manifest.value("image_size", std::size_t{0});
    bundle.labeled.images = load_tensor(at("labeled_images"));
    bundle.labeled.labels = load_labels(at("labeled_labels"));
    if (manifest["files"].contains("unlabeled_images")) {
        bundle.unlabeled = load_tensor(at("unlabeled_images"));
    }
    bundle.val.images = load_tensor(at("val_images"));
    bundle.val.labels = load_labels(at("val_labels"));
    bundle.test.images = load_tensor(at("test_images"));
    bundle.test.labels = load_labels(at("test_labels"));
    bundle.validate();
    return bundle;
}

}  // namespace bootnet
