#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bootnet/tensor.hpp"

namespace bootnet {

struct Node;
using NodePtr = std::shared_ptr<Node>;

/// One vertex of the (acyclic) reverse-mode computation graph.
///
/// `grad` stays empty until a backward pass touches the node. `backward`
/// reads this node's grad and accumulates into the parents' grads. Leaves
/// carry no parents; named leaves are the trainable parameters whose
/// gradients backward() reports.
struct Node {
    Tensor value;
    Tensor grad;  // empty until backward reaches this node
    std::string name;
    std::vector<NodePtr> parents;
    std::function<void(Node&)> backward;

    /// Zero-init the grad buffer if absent.
    Tensor& ensure_grad();
    bool has_grad() const { return !grad.empty(); }
};

/// Leaf with no gradient identity of its own.
NodePtr constant(Tensor value);

/// Named leaf; backward() reports an entry for it when reachable.
NodePtr parameter(Tensor value, std::string name);

/// Interior node; `backward` may be empty for non-differentiable ops.
NodePtr make_node(Tensor value, std::vector<NodePtr> parents,
                  std::function<void(Node&)> backward);

/// Reverse-mode sweep from a scalar loss node.
///
/// Returns gradients for every named leaf reachable from `loss`.
/// Parameters that are not on the path (including everything sealed off
/// behind a stop-gradient barrier) get no entry. Throws ContractError if
/// the loss is not a scalar.
std::map<std::string, Tensor> backward(const NodePtr& loss);

}  // namespace bootnet
