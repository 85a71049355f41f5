#include "bootnet/tensor_io.hpp"

#include "bootnet/errors.hpp"
#include "bootnet/io_bytes.hpp"

namespace bootnet {

namespace {

constexpr char kTensorMagic[4] = {'T', 'N', 'S', 'R'};
constexpr char kLabelsMagic[4] = {'L', 'B', 'L', 'S'};
constexpr std::uint32_t kTensorVersion = 1;
constexpr std::uint32_t kLabelsVersion = 1;
constexpr std::uint8_t kDtypeF64 = 1;

void check_magic(ByteReader& r, const char (&magic)[4], const char* kind) {
    const std::string got = r.bytes(4);
    if (got != std::string(magic, 4)) {
        throw BadMagicError(std::string(kind) + " file " + r.source() +
                            ": bad magic bytes");
    }
}

}  // namespace

void save_tensor(const std::string& path, const Tensor& t) {
    if (t.ndim() == 0) throw ValidationError("save_tensor: refusing to write empty tensor");
    std::vector<std::uint8_t> out;
    put_bytes(out, kTensorMagic, 4);
    put_u32(out, kTensorVersion);
    put_u8(out, kDtypeF64);
    put_u8(out, static_cast<std::uint8_t>(t.ndim()));
    for (std::size_t d : t.shape()) put_u64(out, d);
    for (std::size_t i = 0; i < t.size(); ++i) put_f64(out, t[i]);
    write_file_bytes(path, out);
}

Tensor load_tensor(const std::string& path) {
    const std::vector<std::uint8_t> buf = read_file_bytes(path);
    ByteReader r(buf, path);
    check_magic(r, kTensorMagic, "tensor");
    const std::uint32_t version = r.u32();
    if (version != kTensorVersion) {
        throw BadVersionError("tensor file " + path + ": version " +
                              std::to_string(version) + ", expected " +
                              std::to_string(kTensorVersion));
    }
    const std::uint8_t dtype = r.u8();
    if (dtype != kDtypeF64) {
        throw BadVersionError("tensor file " + path + ": dtype " +
                              std::to_string(dtype) + ", expected " +
                              std::to_string(kDtypeF64));
    }
    const std::uint8_t ndim = r.u8();
    if (ndim == 0) throw TruncatedError("tensor file " + path + ": zero dimensions");
    std::vector<std::size_t> shape(ndim);
    std::size_t count = 1;
    for (std::uint8_t i = 0; i < ndim; ++i) {
        const std::uint64_t d = r.u64();
        if (d == 0 || d > (std::uint64_t(1) << 32)) {
            throw TruncatedError("tensor file " + path + ": implausible dim " +
                                 std::to_string(d));
        }
        shape[i] = static_cast<std::size_t>(d);
        count *= shape[i];
    }
    if (r.remaining() != count * 8) {
        throw TruncatedError("tensor file " + path + ": payload holds " +
                             std::to_string(r.remaining() / 8) + " values, header claims " +
                             std::to_string(count));
    }
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) data[i] = r.f64();
    return Tensor(std::move(shape), std::move(data));
}

void save_labels(const std::string& path, const std::vector<std::uint32_t>& labels) {
    std::vector<std::uint8_t> out;
    put_bytes(out, kLabelsMagic, 4);
    put_u32(out, kLabelsVersion);
    put_u64(out, labels.size());
    for (std::uint32_t v : labels) put_u32(out, v);
    write_file_bytes(path, out);
}

std::vector<std::uint32_t> load_labels(const std::string& path) {
    const std::vector<std::uint8_t> buf = read_file_bytes(path);
    ByteReader r(buf, path);
    check_magic(r, kLabelsMagic, "labels");
    const std::uint32_t version = r.u32();
    if (version != kLabelsVersion) {
        throw BadVersionError("labels file " + path + ": version " +
                              std::to_string(version) + ", expected " +
                              std::to_string(kLabelsVersion));
    }
    const std::uint64_t count = r.u64();
    if (r.remaining() != count * 4) {
        throw TruncatedError("labels file " + path + ": payload holds " +
                             std::to_string(r.remaining() / 4) + " entries, header claims " +
                             std::to_string(count));
    }
    std::vector<std::uint32_t> labels(static_cast<std::size_t>(count));
    for (auto& v : labels) v = r.u32();
    return labels;
}

}  // namespace bootnet
