#include "doctest.h"

#include <cmath>

#include "bootnet/errors.hpp"
#include "bootnet/network.hpp"
#include "bootnet/ops.hpp"

using namespace bootnet;

namespace {

NetworkSpec tiny_spec() {
    NetworkSpec spec;
    spec.input_dim = 6;
    spec.encoder_dims = {5, 4};
    spec.projector_dims = {3};
    spec.predictor_dims = {3};
    spec.num_classes = 2;
    return spec;
}

bool sets_equal(const ParamSet& a, const ParamSet& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [name, t] : a) {
        const auto it = b.find(name);
        if (it == b.end() || !it->second.equals(t)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("spec validation rejects degenerate layouts") {
    NetworkSpec spec = tiny_spec();
    CHECK_NOTHROW(spec.validate());
    spec.predictor_dims = {3, 5};  // output width breaks the latent contract
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = tiny_spec();
    spec.encoder_dims = {};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = tiny_spec();
    spec.encoder_dims = {4, 0};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = tiny_spec();
    spec.input_dim = 0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = tiny_spec();
    spec.num_classes = 0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("init_params is deterministic per seed and names every layer") {
    const NetworkSpec spec = tiny_spec();
    ParamSet a = init_params(spec, 42);
    ParamSet b = init_params(spec, 42);
    ParamSet c = init_params(spec, 43);
    CHECK(sets_equal(a, b));
    CHECK(!sets_equal(a, c));

    const std::vector<std::string> expected = {
        "encoder.0.W", "encoder.0.b", "encoder.1.W", "encoder.1.b",
        "predictor.0.W", "predictor.0.b", "projector.0.W", "projector.0.b",
    };
    REQUIRE(a.size() == expected.size());
    std::size_t i = 0;
    for (const auto& [name, t] : a) {
        CHECK(name == expected[i]);  // std::map iterates sorted
        ++i;
        (void)t;
    }
    CHECK(a.at("encoder.0.W").shape() == std::vector<std::size_t>{6, 5});
    CHECK(a.at("encoder.1.W").shape() == std::vector<std::size_t>{5, 4});
    CHECK(a.at("projector.0.W").shape() == std::vector<std::size_t>{4, 3});
    CHECK(a.at("predictor.0.W").shape() == std::vector<std::size_t>{3, 3});
}

TEST_CASE("initial biases are zero and weights follow the fan-in scale") {
    NetworkSpec spec;
    spec.input_dim = 64;
    spec.encoder_dims = {64, 64};
    spec.projector_dims = {64};
    spec.predictor_dims = {64};
    ParamSet p = init_params(spec, 9);
    for (const auto& [name, t] : p) {
        if (name.back() == 'b') {
            for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == 0.0);
        }
    }
    // 64*64 samples scaled by 1/8: sample std should land near 0.125.
    const Tensor& w = p.at("encoder.0.W");
    double sq = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) mean += w[i];
    mean /= static_cast<double>(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) sq += (w[i] - mean) * (w[i] - mean);
    const double stddev = std::sqrt(sq / static_cast<double>(w.size()));
    CHECK(std::abs(stddev - 0.125) < 0.01);
    CHECK(std::abs(mean) < 0.01);
}

TEST_CASE("encode with identity weights applies relu only between layers") {
    ParamSet p;
    p["encoder.0.W"] = Tensor::eye(2);
    p["encoder.0.b"] = Tensor({2});
    p["encoder.1.W"] = Tensor::eye(2);
    p["encoder.1.b"] = Tensor({2});
    Tensor x = Tensor::mat({{1.0, -2.0}, {-0.5, 3.0}});
    Tensor y = encode(p, x);
    // output = relu(x I) I: the hidden relu fires, no relu after the last layer
    CHECK(y.equals(Tensor::mat({{1.0, 0.0}, {0.0, 3.0}})));
}

TEST_CASE("encode with zero weights maps everything to the bias") {
    ParamSet p;
    p["encoder.0.W"] = Tensor({3, 2});
    p["encoder.0.b"] = Tensor::vec({0.5, -1.5});
    Tensor x = Tensor::mat({{1.0, 2.0, 3.0}});
    Tensor y = encode(p, x);
    CHECK(y.equals(Tensor::mat({{0.5, -1.5}})));
}

TEST_CASE("batched encode equals row-by-row encode") {
    const NetworkSpec spec = tiny_spec();
    ParamSet p = init_params(spec, 3);
    Rng rng(5);
    Tensor x({4, 6});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    Tensor batched = encode(p, x);
    for (std::size_t i = 0; i < 4; ++i) {
        Tensor row = encode(p, x.slice_rows(i, i + 1));
        for (std::size_t j = 0; j < row.size(); ++j) {
            CHECK(batched[i * row.size() + j] == row[j]);
        }
    }
}

TEST_CASE("encode is positively homogeneous when biases are zero") {
    const NetworkSpec spec = tiny_spec();
    ParamSet p = init_params(spec, 11);  // biases start at zero
    Rng rng(6);
    Tensor x({3, 6});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    Tensor scaled = x;
    const double c = 2.5;
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= c;
    Tensor y = encode(p, x);
    Tensor yc = encode(p, scaled);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(yc[i] == doctest::Approx(c * y[i]).epsilon(1e-12));
    }
}

TEST_CASE("project and predict_latent run their own groups") {
    const NetworkSpec spec = tiny_spec();
    ParamSet p = init_params(spec, 21);
    Rng rng(7);
    Tensor y({2, 4});
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.normal();
    Tensor z = project(p, y);
    CHECK(z.shape() == std::vector<std::size_t>{2, 3});
    Tensor q = predict_latent(p, z);
    CHECK(q.shape() == std::vector<std::size_t>{2, 3});
    // single-layer projector: z == y W + b by hand
    Tensor expect = matmul(y, p.at("projector.0.W"));
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(z.at(i, j) == doctest::Approx(expect.at(i, j) +
                                                p.at("projector.0.b")[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("predict_latent and classify demand their groups") {
    const NetworkSpec spec = tiny_spec();
    ParamSet p = init_params(spec, 2);
    ParamSet no_predictor = group_subset(p, "encoder");
    for (const auto& [name, t] : group_subset(p, "projector")) no_predictor[name] = t;
    Tensor z({1, 3});
    CHECK_THROWS_AS(predict_latent(no_predictor, z), ContractError);
    Tensor y({1, 4});
    CHECK_THROWS_AS(classify(p, y), ContractError);  // init_params makes no head
}

TEST_CASE("classify routes through the projector only when one is present") {
    ParamSet direct;
    direct["head.0.W"] = Tensor::eye(2);
    direct["head.0.b"] = Tensor({2});
    Tensor y = Tensor::mat({{0.3, -0.4}});
    CHECK(classify(direct, y).equals(y));

    ParamSet via_proj = direct;
    via_proj["projector.0.W"] = Tensor::mat({{2.0, 0.0}, {0.0, 2.0}});
    via_proj["projector.0.b"] = Tensor({2});
    Tensor logits = classify(via_proj, y);
    CHECK(logits.equals(Tensor::mat({{0.6, -0.8}})));
}

TEST_CASE("logits_for flattens image batches") {
    ParamSet p;
    p["encoder.0.W"] = Tensor::eye(4);
    p["encoder.0.b"] = Tensor({4});
    p["head.0.W"] = Tensor({4, 2}, {1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0});
    p["head.0.b"] = Tensor({2});
    Tensor images({2, 2, 2, 1}, {0.1, 0.2, 0.3, 0.4, 1.0, 0.0, 1.0, 0.0});
    Tensor logits = logits_for(p, images);
    REQUIRE(logits.shape() == std::vector<std::size_t>{2, 2});
    CHECK(logits.at(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(logits.at(0, 1) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(logits.at(1, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(logits.at(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("group helpers find and slice groups") {
    const NetworkSpec spec = tiny_spec();
    ParamSet p = init_params(spec, 8);
    CHECK(has_group(p, "encoder"));
    CHECK(has_group(p, "predictor"));
    CHECK(!has_group(p, "head"));
    ParamSet enc = group_subset(p, "encoder");
    CHECK(enc.size() == 4);
    for (const auto& [name, t] : enc) {
        CHECK(name.rfind("encoder.", 0) == 0);
        CHECK(t.equals(p.at(name)));
    }
}

TEST_CASE("group_forward reports a missing bias and a missing group") {
    ParamSet p;
    p["encoder.0.W"] = Tensor::eye(2);
    LeafMap leaves = make_leaves(p);
    NodePtr x = constant(Tensor::mat({{1.0, 2.0}}));
    CHECK_THROWS_AS(group_forward(leaves, "", "encoder", x), ContractError);
    CHECK_THROWS_AS(group_forward(leaves, "", "projector", x), ContractError);
}

TEST_CASE("forward passes validate input shape") {
    const NetworkSpec spec = tiny_spec();
    ParamSet p = init_params(spec, 4);
    CHECK_THROWS_AS(encode(p, Tensor::vec({1.0, 2.0})), ShapeError);
    CHECK_THROWS_AS(encode(p, Tensor({2, 5})), ShapeError);  // width 5 != input_dim 6
}

TEST_CASE("make_train_state copies encoder and projector into the target") {
    const NetworkSpec spec = tiny_spec();
    TrainState state = make_train_state(spec, 0.99, 0.05, 17);
    CHECK(state.step == 0);
    CHECK(state.tau == 0.99);
    CHECK(state.eta == 0.05);
    CHECK(state.target.size() == 6);  // encoder (4) + projector (2), no predictor
    CHECK(!has_group(state.target, "predictor"));
    for (const auto& [name, t] : state.target) {
        CHECK(t.equals(state.online.at(name)));
    }
    CHECK_THROWS_AS(make_train_state(spec, 1.5, 0.05, 0), ValidationError);
    CHECK_THROWS_AS(make_train_state(spec, 0.5, 0.0, 0), ValidationError);
}

TEST_CASE("ema_update endpoints: tau=1 freezes, tau=0 copies") {
    const NetworkSpec spec = tiny_spec();
    TrainState state = make_train_state(spec, 1.0, 0.1, 23);
    // push online away so the two sides differ
    for (auto& [name, t] : state.online) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] += 1.0;
        (void)name;
    }
    ParamSet before = state.target;
    TrainState frozen = ema_update(state);
    for (const auto& [name, t] : frozen.target) CHECK(t.equals(before.at(name)));

    frozen.tau = 0.0;
    TrainState copied = ema_update(frozen);
    for (const auto& [name, t] : copied.target) CHECK(t.equals(copied.online.at(name)));
}

TEST_CASE("repeated ema contraction follows the geometric law") {
    const NetworkSpec spec = tiny_spec();
    TrainState state = make_train_state(spec, 0.99, 0.1, 29);
    Rng rng(31);
    for (auto& [name, t] : state.target) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] += rng.normal();
        (void)name;
    }
    auto distance = [](const ParamSet& a, const ParamSet& b) {
        double sq = 0.0;
        for (const auto& [name, t] : b) {
            const Tensor& o = a.at(name);
            for (std::size_t i = 0; i < t.size(); ++i) sq += (t[i] - o[i]) * (t[i] - o[i]);
        }
        return std::sqrt(sq);
    };
    const double d0 = distance(state.online, state.target);
    REQUIRE(d0 > 0.1);
    for (int k = 0; k < 10; ++k) state = ema_update(std::move(state));
    const double d10 = distance(state.online, state.target);
    CHECK(std::abs(d10 - 0.9043820750088044 * d0) < 1e-12 * d0);
}

TEST_CASE("ema_update leaves the online set untouched") {
    const NetworkSpec spec = tiny_spec();
    TrainState state = make_train_state(spec, 0.5, 0.1, 37);
    for (auto& [name, t] : state.target) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] += 0.25;
        (void)name;
    }
    ParamSet online_before = state.online;
    TrainState after = ema_update(std::move(state));
    CHECK(sets_equal(after.online, online_before));
}

TEST_CASE("ema_update rejects a target entry without an online twin") {
    const NetworkSpec spec = tiny_spec();
    TrainState state = make_train_state(spec, 0.9, 0.1, 41);
    state.target["stray.0.W"] = Tensor({1});
    CHECK_THROWS_AS(ema_update(std::move(state)), ContractError);
    TrainState state2 = make_train_state(spec, 0.9, 0.1, 41);
    state2.target["encoder.0.b"] = Tensor({7});
    CHECK_THROWS_AS(ema_update(std::move(state2)), ContractError);
}
