#include "bootnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "bootnet/errors.hpp"

namespace bootnet {

GradReport grad_check(const ScalarFn& fn, const ParamSet& params, double step) {
    if (step <= 0.0) {
        throw ValidationError("grad_check: step must be > 0");
    }

    NodePtr loss = fn(params);
    GradMap analytic = backward(loss);

    auto eval = [&fn](const ParamSet& p) -> double {
        NodePtr node = fn(p);
        if (node->value.size() != 1) {
            throw ContractError("grad_check: fn must return a scalar node");
        }
        return node->value[0];
    };

    GradReport report;
    ParamSet probe = params;
    for (const auto& [name, tensor] : params) {
        const auto ait = analytic.find(name);
        double worst = 0.0;
        Tensor& pt = probe[name];
        for (std::size_t i = 0; i < tensor.size(); ++i) {
            const double original = pt[i];
            pt[i] = original + step;
            const double up = eval(probe);
            pt[i] = original - step;
            const double down = eval(probe);
            pt[i] = original;
            const double numeric = (up - down) / (2.0 * step);
            const double a = ait != analytic.end() ? ait->second[i] : 0.0;
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
            worst = std::max(worst, std::abs(a - numeric) / denom);
        }
        report.per_parameter[name] = worst;
        report.max_rel_error = std::max(report.max_rel_error, worst);
    }
    return report;
}

}  // namespace bootnet
