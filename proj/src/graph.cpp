#include "bootnet/graph.hpp"

#include <unordered_set>

#include "bootnet/errors.hpp"

namespace bootnet {

Tensor& Node::ensure_grad() {
    if (grad.empty()) grad = Tensor(value.shape());
    return grad;
}

NodePtr constant(Tensor value) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    return n;
}

NodePtr parameter(Tensor value, std::string name) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->name = std::move(name);
    return n;
}

NodePtr make_node(Tensor value, std::vector<NodePtr> parents,
                  std::function<void(Node&)> backward) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->parents = std::move(parents);
    n->backward = std::move(backward);
    return n;
}

namespace {

// Iterative post-order DFS; recursion would overflow on long chains.
void topo_sort(const NodePtr& root, std::vector<Node*>& order) {
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, std::size_t>> stack;
    stack.emplace_back(root.get(), 0);
    visited.insert(root.get());
    while (!stack.empty()) {
        auto& [node, next_child] = stack.back();
        if (next_child < node->parents.size()) {
            Node* child = node->parents[next_child++].get();
            if (visited.insert(child).second) {
                stack.emplace_back(child, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
}

}  // namespace

std::map<std::string, Tensor> backward(const NodePtr& loss) {
    if (!loss) throw ContractError("backward: null loss node");
    if (loss->value.size() != 1) {
        throw ContractError("backward: loss must be scalar, got shape " +
                            loss->value.shape_str());
    }

    std::vector<Node*> order;
    topo_sort(loss, order);

    for (Node* n : order) n->grad = Tensor();
    loss->ensure_grad()[0] = 1.0;

    // order is post-order (parents before consumers); walk it backwards.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* n = *it;
        if (n->backward && n->has_grad()) n->backward(*n);
    }

    std::map<std::string, Tensor> grads;
    for (Node* n : order) {
        if (!n->name.empty()) {
            grads[n->name] = n->has_grad() ? n->grad : Tensor(n->value.shape());
        }
    }
    return grads;
}

}  // namespace bootnet
