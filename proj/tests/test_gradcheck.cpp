#include "doctest.h"

#include <cmath>

#include "bootnet/errors.hpp"
#include "bootnet/gradcheck.hpp"
#include "bootnet/ops.hpp"

using namespace bootnet;

TEST_CASE("quadratic loss passes far below 1e-6") {
    ParamSet params;
    params["p"] = Tensor::vec({1.5, -0.25, 2.0});
    params["q"] = Tensor::mat({{0.5, 1.0}, {-1.5, 0.25}});
    ScalarFn fn = [](const ParamSet& ps) {
        NodePtr p = parameter(ps.at("p"), "p");
        NodePtr q = parameter(ps.at("q"), "q");
        return add(sum(mul(p, p)), sum(mul(q, q)));
    };
    GradReport report = grad_check(fn, params);
    CHECK(report.max_rel_error < 1e-6);
    CHECK(report.per_parameter.size() == 2);
    double mx = 0.0;
    for (const auto& [name, v] : report.per_parameter) mx = std::max(mx, v);
    CHECK(report.max_rel_error == mx);
}

TEST_CASE("corrupted backward rule is detected") {
    // square with a backward rule inflated by 10%
    auto bad_square = [](const NodePtr& x) {
        Tensor v = x->value;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] * v[i];
        return make_node(std::move(v), {x}, [x](Node& self) {
            Tensor& gx = x->ensure_grad();
            for (std::size_t i = 0; i < gx.size(); ++i) {
                gx[i] += 1.1 * 2.0 * x->value[i] * self.grad[i];
            }
        });
    };
    ParamSet params;
    params["p"] = Tensor::vec({1.0, -2.0, 0.5});
    ScalarFn fn = [&](const ParamSet& ps) {
        return sum(bad_square(parameter(ps.at("p"), "p")));
    };
    GradReport report = grad_check(fn, params);
    CHECK(report.max_rel_error > 1e-2);
}

TEST_CASE("report covers every parameter even when a gradient is absent") {
    ParamSet params;
    params["used"] = Tensor::vec({2.0});
    params["unused"] = Tensor::vec({3.0});
    ScalarFn fn = [](const ParamSet& ps) {
        NodePtr u = parameter(ps.at("used"), "used");
        parameter(ps.at("unused"), "unused");
        return sum(mul(u, u));
    };
    GradReport report = grad_check(fn, params);
    // "unused" has zero analytic and zero numeric gradient: no error
    CHECK(report.per_parameter.count("unused") == 1);
    CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("step must be positive") {
    ParamSet params;
    params["p"] = Tensor::vec({1.0});
    ScalarFn fn = [](const ParamSet& ps) { return sum(parameter(ps.at("p"), "p")); };
    CHECK_THROWS_AS(grad_check(fn, params, 0.0), ValidationError);
}

TEST_CASE("sgd_step hand cases") {
    ParamSet params;
    params["p"] = Tensor::vec({1.0});
    GradMap grads;
    grads["p"] = Tensor::vec({2.0});
    ParamSet next = sgd_step(params, grads, 0.5);
    CHECK(next["p"][0] == 0.0);

    // eta -> 0 limit: 1.0 - 1e-300 * 2 rounds back to exactly 1.0
    ParamSet tiny = sgd_step(params, grads, 1e-300);
    CHECK(tiny["p"][0] == 1.0);

    CHECK_THROWS_AS(sgd_step(params, grads, 0.0), ValidationError);
    CHECK_THROWS_AS(sgd_step(params, grads, -1.0), ValidationError);

    GradMap missing;
    CHECK_THROWS_AS(sgd_step(params, missing, 0.1), ContractError);

    GradMap wrong_shape;
    wrong_shape["p"] = Tensor::vec({1.0, 2.0});
    CHECK_THROWS_AS(sgd_step(params, wrong_shape, 0.1), ContractError);
}

TEST_CASE("100 descent steps on p^2 contract by 0.8 per step") {
    ParamSet params;
    params["p"] = Tensor::vec({1.0});
    for (int i = 0; i < 100; ++i) {
        NodePtr p = parameter(params.at("p"), "p");
        GradMap grads = backward(sum(mul(p, p)));
        params = sgd_step(std::move(params), grads, 0.1);
    }
    CHECK(params["p"][0] == doctest::Approx(std::pow(0.8, 100)).epsilon(1e-12));
}
