#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bootnet/tensor.hpp"

namespace bootnet {

/// Tensor file: "TNSR", u32 version (=1), u8 dtype (1 = 64-bit float),
/// u8 ndim, ndim x u64 dims, row-major little-endian payload.
void save_tensor(const std::string& path, const Tensor& t);
Tensor load_tensor(const std::string& path);

/// Labels file: "LBLS", u32 version (=1), u64 count, count x u32 indices.
void save_labels(const std::string& path, const std::vector<std::uint32_t>& labels);
std::vector<std::uint32_t> load_labels(const std::string& path);

}  // namespace bootnet
