#pragma once

#include <cstdint>
#include <vector>

#include "bootnet/tensor.hpp"

namespace bootnet {

/// Images [N x H x W x C] paired with class indices, one per image.
struct LabeledSet {
    Tensor images;
    std::vector<std::uint32_t> labels;

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }

    /// Checks count agreement and that every label is < num_classes.
    void validate(std::size_t num_classes) const;
};

}  // namespace bootnet
