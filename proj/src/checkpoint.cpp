#include "bootnet/checkpoint.hpp"

#include "bootnet/errors.hpp"
#include "bootnet/io_bytes.hpp"

namespace bootnet {

namespace {
constexpr char kMagic[4] = {'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_checkpoint(const std::string& path, const ParamSet& params) {
    std::vector<std::uint8_t> out;
    put_bytes(out, kMagic, 4);
    put_u32(out, kVersion);
    for (const auto& [name, t] : params) {
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        put_bytes(out, name.data(), name.size());
        put_u8(out, static_cast<std::uint8_t>(t.ndim()));
        for (std::size_t d : t.shape()) put_u64(out, d);
        for (std::size_t i = 0; i < t.size(); ++i) put_f64(out, t[i]);
    }
    write_file_bytes(path, out);
}

ParamSet load_checkpoint(const std::string& path) {
    const std::vector<std::uint8_t> buf = read_file_bytes(path);
    ByteReader r(buf, path);
    if (r.bytes(4) != std::string(kMagic, 4)) {
        throw BadMagicError(path + ": bad magic, not a checkpoint file");
    }
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw BadVersionError(path + ": unsupported checkpoint version " +
                              std::to_string(version));
    }
    ParamSet params;
    while (!r.at_end()) {
        const std::uint32_t name_len = r.u32();
        const std::string name = r.bytes(name_len);
        const std::uint8_t ndim = r.u8();
        std::vector<std::size_t> shape;
        std::size_t count = 1;
        for (std::uint8_t d = 0; d < ndim; ++d) {
            const std::uint64_t dim = r.u64();
            shape.push_back(static_cast<std::size_t>(dim));
            count *= static_cast<std::size_t>(dim);
        }
        if (count * 8 > r.remaining()) {
            throw TruncatedError(path + ": truncated payload for tensor '" + name + "'");
        }
        std::vector<double> data(count);
        for (std::size_t i = 0; i < count; ++i) data[i] = r.f64();
        params[name] = Tensor(std::move(shape), std::move(data));
    }
    return params;
}

ParamSet tag_train_groups(const ParamSet& online, const ParamSet& target) {
    ParamSet tagged;
    for (const auto& [name, t] : online) tagged["online." + name] = t;
    for (const auto& [name, t] : target) tagged["target." + name] = t;
    return tagged;
}

ParamSet untag_group(const ParamSet& tagged, const std::string& prefix) {
    ParamSet out;
    for (const auto& [name, t] : tagged) {
        if (name.rfind(prefix, 0) == 0) out[name.substr(prefix.size())] = t;
    }
    return out;
}

}  // namespace bootnet
