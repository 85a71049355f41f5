#include "bootnet/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "bootnet/errors.hpp"

namespace bootnet {

void GridSpec::validate() const {
    if (epochs_list.empty() || eta_list.empty() || pseudo_k_list.empty()) {
        throw ValidationError("grid: all three lists must be nonempty");
    }
    for (std::size_t e : epochs_list) {
        if (e == 0) throw ValidationError("grid: epochs values must be positive");
    }
    for (double v : eta_list) {
        if (!(v > 0.0)) throw ValidationError("grid: eta values must be > 0");
    }
}

void ExperimentConfig::validate() const {
    data.validate();
    model.validate();
    augment.validate();
    pretrain.validate();
    finetune.validate();
    grid.validate();
    if (out_dir.empty()) throw ValidationError("config: out_dir must not be empty");
    if (model.num_classes != data.num_classes) {
        throw ValidationError("config: model num_classes " +
                              std::to_string(model.num_classes) + " does not match data " +
                              std::to_string(data.num_classes));
    }
    if (model.input_dim != data.image_size * data.image_size) {
        throw ValidationError("config: model input_dim " + std::to_string(model.input_dim) +
                              " does not match image_size^2 = " +
                              std::to_string(data.image_size * data.image_size));
    }
}

namespace {

struct Line {
    std::string section;
    std::string key;
    std::string value;  // raw text, trimmed
    std::size_t number = 0;
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Removes a # comment, respecting double-quoted strings.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
}

std::uint64_t parse_u64(const Line& l, const std::string& source) {
    const std::string& v = l.value;
    if (v.empty() || v[0] == '-') fail(source, l.number, "'" + l.key + "' wants a nonnegative integer, got '" + v + "'");
    std::size_t used = 0;
    std::uint64_t out = 0;
    try {
        out = std::stoull(v, &used);
    } catch (const std::exception&) {
        fail(source, l.number, "'" + l.key + "' wants an integer, got '" + v + "'");
    }
    if (used != v.size()) fail(source, l.number, "'" + l.key + "' wants an integer, got '" + v + "'");
    return out;
}

double parse_double(const Line& l, const std::string& source) {
    const std::string& v = l.value;
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        fail(source, l.number, "'" + l.key + "' wants a number, got '" + v + "'");
    }
    if (used != v.size()) fail(source, l.number, "'" + l.key + "' wants a number, got '" + v + "'");
    return out;
}

bool parse_bool(const Line& l, const std::string& source) {
    if (l.value == "true") return true;
    if (l.value == "false") return false;
    fail(source, l.number, "'" + l.key + "' wants true or false, got '" + l.value + "'");
}

std::string parse_string(const Line& l, const std::string& source) {
    const std::string& v = l.value;
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
        fail(source, l.number, "'" + l.key + "' wants a quoted string, got '" + v + "'");
    }
    return v.substr(1, v.size() - 2);
}

std::vector<std::string> split_array(const Line& l, const std::string& source) {
    const std::string& v = l.value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
        fail(source, l.number, "'" + l.key + "' wants an array like [1, 2], got '" + v + "'");
    }
    std::vector<std::string> parts;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(source, l.number, "'" + l.key + "' has an empty array element");
        parts.push_back(item);
    }
    if (parts.empty()) fail(source, l.number, "'" + l.key + "' wants a nonempty array");
    return parts;
}

std::vector<std::size_t> parse_array_u64(const Line& l, const std::string& source) {
    std::vector<std::size_t> out;
    for (const std::string& item : split_array(l, source)) {
        Line elem{l.section, l.key, item, l.number};
        out.push_back(static_cast<std::size_t>(parse_u64(elem, source)));
    }
    return out;
}

std::vector<double> parse_array_double(const Line& l, const std::string& source) {
    std::vector<double> out;
    for (const std::string& item : split_array(l, source)) {
        Line elem{l.section, l.key, item, l.number};
        out.push_back(parse_double(elem, source));
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    std::vector<Line> lines;
    {
        std::stringstream ss(text);
        std::string raw;
        std::string section;
        std::size_t number = 0;
        while (std::getline(ss, raw)) {
            ++number;
            const std::string stripped = trim(strip_comment(raw));
            if (stripped.empty()) continue;
            if (stripped.front() == '[') {
                if (stripped.back() != ']') fail(source, number, "unterminated section header");
                section = trim(stripped.substr(1, stripped.size() - 2));
                const bool known = section == "data" || section == "model" ||
                                   section == "augment" || section == "pretrain" ||
                                   section == "finetune" || section == "grid";
                if (!known) fail(source, number, "unknown section [" + section + "]");
                continue;
            }
            const std::size_t eq = stripped.find('=');
            if (eq == std::string::npos) fail(source, number, "expected 'key = value'");
            Line l;
            l.section = section;
            l.key = trim(stripped.substr(0, eq));
            l.value = trim(stripped.substr(eq + 1));
            l.number = number;
            if (l.key.empty()) fail(source, number, "empty key");
            if (l.value.empty()) fail(source, number, "empty value for '" + l.key + "'");
            lines.push_back(std::move(l));
        }
    }

    ExperimentConfig cfg;
    bool seed_set[4] = {false, false, false, false};  // data, pretrain, finetune, global
    bool input_dim_set = false, model_classes_set = false;

    for (const Line& l : lines) {
        if (l.section.empty()) {
            if (l.key == "out_dir") cfg.out_dir = parse_string(l, source);
            else if (l.key == "seed") { cfg.seed = parse_u64(l, source); seed_set[3] = true; }
            else if (l.key == "deterministic") cfg.deterministic = parse_bool(l, source);
            else fail(source, l.number, "unknown top-level key '" + l.key + "'");
        } else if (l.section == "data") {
            if (l.key == "num_classes") cfg.data.num_classes = parse_u64(l, source);
            else if (l.key == "per_class") cfg.data.per_class = parse_u64(l, source);
            else if (l.key == "image_size") cfg.data.image_size = parse_u64(l, source);
            else if (l.key == "labeled_fraction") cfg.data.labeled_fraction = parse_double(l, source);
            else if (l.key == "noise") cfg.data.noise = parse_double(l, source);
            else if (l.key == "seed") { cfg.data.seed = parse_u64(l, source); seed_set[0] = true; }
            else fail(source, l.number, "unknown [data] key '" + l.key + "'");
        } else if (l.section == "model") {
            if (l.key == "input_dim") { cfg.model.input_dim = parse_u64(l, source); input_dim_set = true; }
            else if (l.key == "encoder_dims") cfg.model.encoder_dims = parse_array_u64(l, source);
            else if (l.key == "projector_dims") cfg.model.projector_dims = parse_array_u64(l, source);
            else if (l.key == "predictor_dims") cfg.model.predictor_dims = parse_array_u64(l, source);
            else if (l.key == "num_classes") { cfg.model.num_classes = parse_u64(l, source); model_classes_set = true; }
            else if (l.key == "head_input") {
                const std::string v = parse_string(l, source);
                if (v == "representation") cfg.model.head_input = HeadInput::representation;
                else if (v == "projection") cfg.model.head_input = HeadInput::projection;
                else fail(source, l.number, "head_input wants \"representation\" or \"projection\"");
            } else fail(source, l.number, "unknown [model] key '" + l.key + "'");
        } else if (l.section == "augment") {
            if (l.key == "crop_min_fraction") cfg.augment.crop_min_fraction = parse_double(l, source);
            else if (l.key == "flip_probability") cfg.augment.flip_probability = parse_double(l, source);
            else if (l.key == "brightness_delta") cfg.augment.brightness_delta = parse_double(l, source);
            else if (l.key == "contrast_low") cfg.augment.contrast_low = parse_double(l, source);
            else if (l.key == "contrast_high") cfg.augment.contrast_high = parse_double(l, source);
            else if (l.key == "noise_sigma") cfg.augment.noise_sigma = parse_double(l, source);
            else fail(source, l.number, "unknown [augment] key '" + l.key + "'");
        } else if (l.section == "pretrain") {
            if (l.key == "epochs") cfg.pretrain.epochs = parse_u64(l, source);
            else if (l.key == "batch_size") cfg.pretrain.batch_size = parse_u64(l, source);
            else if (l.key == "eta") cfg.pretrain.eta = parse_double(l, source);
            else if (l.key == "tau") cfg.pretrain.tau = parse_double(l, source);
            else if (l.key == "seed") { cfg.pretrain.seed = parse_u64(l, source); seed_set[1] = true; }
            else fail(source, l.number, "unknown [pretrain] key '" + l.key + "'");
        } else if (l.section == "finetune") {
            if (l.key == "epochs") cfg.finetune.epochs = parse_u64(l, source);
            else if (l.key == "batch_size") cfg.finetune.batch_size = parse_u64(l, source);
            else if (l.key == "eta") cfg.finetune.eta = parse_double(l, source);
            else if (l.key == "pseudo_k") cfg.finetune.pseudo_k = parse_u64(l, source);
            else if (l.key == "rounds") cfg.finetune.rounds = parse_u64(l, source);
            else if (l.key == "seed") { cfg.finetune.seed = parse_u64(l, source); seed_set[2] = true; }
            else fail(source, l.number, "unknown [finetune] key '" + l.key + "'");
        } else if (l.section == "grid") {
            if (l.key == "epochs") cfg.grid.epochs_list = parse_array_u64(l, source);
            else if (l.key == "eta") cfg.grid.eta_list = parse_array_double(l, source);
            else if (l.key == "pseudo_k") cfg.grid.pseudo_k_list = parse_array_u64(l, source);
            else fail(source, l.number, "unknown [grid] key '" + l.key + "'");
        }
    }

    if (seed_set[3]) {
        if (!seed_set[0]) cfg.data.seed = cfg.seed;
        if (!seed_set[1]) cfg.pretrain.seed = cfg.seed;
        if (!seed_set[2]) cfg.finetune.seed = cfg.seed;
    }
    if (!input_dim_set) cfg.model.input_dim = cfg.data.image_size * cfg.data.image_size;
    if (!model_classes_set) cfg.model.num_classes = cfg.data.num_classes;

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void override_seed(ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.seed = seed;
    cfg.data.seed = seed;
    cfg.pretrain.seed = seed;
    cfg.finetune.seed = seed;
}

}  // namespace bootnet
