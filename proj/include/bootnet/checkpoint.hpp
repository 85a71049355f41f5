#pragma once

#include <string>

#include "bootnet/params.hpp"

namespace bootnet {

/// Checkpoint file: "CKPT", u32 version (=1), then one record per tensor:
/// [name length u32][UTF-8 name][ndim u8][each dim u64][little-endian f64
/// payload]. Records appear in map order, so identical contents serialize
/// to identical bytes.
void save_checkpoint(const std::string& path, const ParamSet& params);
ParamSet load_checkpoint(const std::string& path);

/// Tensors prefixed "online." / "target." merged into one checkpoint map.
ParamSet tag_train_groups(const ParamSet& online, const ParamSet& target);
/// Inverse of the tagging: extracts one prefixed group, prefix stripped.
ParamSet untag_group(const ParamSet& tagged, const std::string& prefix);

}  // namespace bootnet
