#include "doctest.h"

#include <cmath>
#include <vector>

#include "bootnet/errors.hpp"
#include "bootnet/ops.hpp"
#include "bootnet/rng.hpp"

using namespace bootnet;

namespace {

// Independent triple-loop product, the oracle for matmul.
Tensor matmul_oracle(const Tensor& a, const Tensor& b) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Tensor out({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += a.at(i, t) * b.at(t, j);
            out.at(i, j) = acc;
        }
    }
    return out;
}

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.normal();
    return t;
}

}  // namespace

TEST_CASE("matmul identity and hand cases") {
    Tensor eye = Tensor::mat({{1, 0}, {0, 1}});
    Tensor col = Tensor::mat({{3}, {4}});
    CHECK(matmul(eye, col).equals(col));

    Tensor row = Tensor::mat({{1, 2}});
    Tensor prod = matmul(row, col);
    CHECK(prod.shape() == std::vector<std::size_t>{1, 1});
    CHECK(prod[0] == 11.0);
}

TEST_CASE("matmul matches the triple-loop oracle") {
    Rng rng(17);
    Tensor a = random_tensor({3, 4}, rng);
    Tensor b = random_tensor({4, 2}, rng);
    Tensor got = matmul(a, b);
    Tensor want = matmul_oracle(a, b);
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }

    // shapes up to 16 x 16
    for (int round = 0; round < 10; ++round) {
        const std::size_t m = 1 + rng.uniform_int(16);
        const std::size_t k = 1 + rng.uniform_int(16);
        const std::size_t n = 1 + rng.uniform_int(16);
        Tensor x = random_tensor({m, k}, rng);
        Tensor y = random_tensor({k, n}, rng);
        Tensor g = matmul(x, y);
        Tensor w = matmul_oracle(x, y);
        for (std::size_t i = 0; i < w.size(); ++i) {
            CHECK(g[i] == doctest::Approx(w[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("matmul names both shapes on mismatch") {
    Tensor a({2, 3});
    Tensor b({2, 3});
    try {
        matmul(a, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("[2 x 3]") != std::string::npos);
    }
}

TEST_CASE("relu clamps negatives") {
    Tensor x = Tensor::vec({-1, 0, 2});
    Tensor y = relu(x);
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 0.0);
    CHECK(y[2] == 2.0);

    Tensor pos = Tensor::vec({1, 2, 3});
    CHECK(relu(pos).equals(pos));
}

TEST_CASE("l2_normalize basics") {
    Tensor a = l2_normalize(Tensor::vec({3, 4}));
    CHECK(a[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(0.8).epsilon(1e-15));

    Tensor zero = l2_normalize(Tensor::vec({0, 0}));
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);

    Tensor unit = l2_normalize(Tensor::vec({2, 0, 0}));
    CHECK(unit[0] == 1.0);
    CHECK(unit[1] == 0.0);
}

TEST_CASE("l2_normalize yields unit norm for inputs above 1e-6") {
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        Tensor x = random_tensor({5}, rng);
        double norm_in = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) norm_in += x[j] * x[j];
        if (std::sqrt(norm_in) < 1e-6) continue;
        Tensor y = l2_normalize(x);
        double norm = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) norm += y[j] * y[j];
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("l2_normalize works row-wise on matrices") {
    Tensor m = Tensor::mat({{3, 4}, {0, 5}});
    Tensor y = l2_normalize(m);
    CHECK(y.at(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(y.at(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("softmax rows sum to one") {
    Rng rng(29);
    Tensor logits = random_tensor({6, 5}, rng);
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] *= 10.0;
    Tensor p = softmax_rows(logits);
    for (std::size_t r = 0; r < p.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < p.cols(); ++c) {
            CHECK(p.at(r, c) >= 0.0);
            s += p.at(r, c);
        }
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("softmax survives huge logits") {
    Tensor logits = Tensor::mat({{1000.0, 0.0, -1000.0}});
    Tensor p = softmax_rows(logits);
    CHECK(p.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.all_finite());
}

TEST_CASE("cross_entropy hand values") {
    // uniform logits -> ln C
    Tensor uniform = Tensor::mat({{0, 0, 0}});
    Tensor onehot = Tensor::mat({{0, 1, 0}});
    CHECK(cross_entropy(uniform, onehot) == doctest::Approx(std::log(3.0)).epsilon(1e-15));

    // saturated correct class -> ~0
    Tensor sat = Tensor::mat({{1000, 0, 0}});
    Tensor first = Tensor::mat({{1, 0, 0}});
    CHECK(cross_entropy(sat, first) < 1e-6);

    // direct formula: -log(e^3 / (e^1 + e^2 + e^3))
    Tensor l = Tensor::mat({{1, 2, 3}});
    Tensor third = Tensor::mat({{0, 0, 1}});
    const double want =
        -std::log(std::exp(3.0) / (std::exp(1.0) + std::exp(2.0) + std::exp(3.0)));
    CHECK(cross_entropy(l, third) == doctest::Approx(want).epsilon(1e-12));
    CHECK(want == doctest::Approx(0.40761).epsilon(1e-4));
}

TEST_CASE("cross_entropy is a mean over rows and never negative") {
    Tensor logits = Tensor::mat({{0, 0, 0}, {0, 0, 0}});
    Tensor onehot = Tensor::mat({{1, 0, 0}, {0, 0, 1}});
    CHECK(cross_entropy(logits, onehot) == doctest::Approx(std::log(3.0)).epsilon(1e-15));

    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        Tensor l = random_tensor({3, 4}, rng);
        Tensor y({3, 4});
        for (std::size_t r = 0; r < 3; ++r) y.at(r, rng.uniform_int(4)) = 1.0;
        CHECK(cross_entropy(l, y) >= 0.0);
    }
}

TEST_CASE("cross_entropy rejects malformed one-hot rows") {
    Tensor logits = Tensor::mat({{0, 0}});
    CHECK_THROWS_AS(cross_entropy(logits, Tensor::mat({{1, 1}})), ValidationError);
    CHECK_THROWS_AS(cross_entropy(logits, Tensor::mat({{0, 0}})), ValidationError);
    CHECK_THROWS_AS(cross_entropy(logits, Tensor::mat({{0.5, 0.5}})), ValidationError);
    CHECK_THROWS_AS(cross_entropy(logits, Tensor::mat({{1, 0}, {0, 1}})), ShapeError);
}

TEST_CASE("one_hot encodes labels") {
    Tensor y = one_hot({2, 0}, 3);
    CHECK(y.shape() == std::vector<std::size_t>{2, 3});
    CHECK(y.at(0, 2) == 1.0);
    CHECK(y.at(0, 0) == 0.0);
    CHECK(y.at(1, 0) == 1.0);
    CHECK_THROWS_AS(one_hot({3}, 3), ValidationError);
}
