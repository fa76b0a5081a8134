#include <doctest.h>

#include <cmath>
#include <numeric>

#include "wscnn/nn.hpp"

using namespace wscnn;
using namespace wscnn::nn;

namespace {

DTensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    DTensor t(std::move(shape));
    for (double& v : t.data) {
        v = lo + (hi - lo) * rng.uniform01();
        // Keep values away from relu/argmax decision points.
        if (std::abs(v) < 0.05) v += 0.1;
    }
    return t;
}

// Scalar objective: fixed random linear functional of the layer output.
DTensor coefficients(const std::vector<int>& shape, Rng& rng) {
    DTensor c(shape);
    for (double& v : c.data) v = -1.0 + 2.0 * rng.uniform01();
    return c;
}

double dot(const DTensor& a, const DTensor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

}  // namespace

TEST_CASE("embedding forward looks up rows; zero row stays zero") {
    DTensor table({4, 2}, {0, 0, 1, 2, 3, 4, 5, 6});
    auto out = embedding_forward<double>({0, 2, 1}, 1, 3, table);
    CHECK(out.shape == std::vector<int>{1, 3, 2});
    CHECK(out.data == std::vector<double>{0, 0, 3, 4, 1, 2});
    CHECK_THROWS(embedding_forward<double>({4}, 1, 1, table));
    CHECK_THROWS(embedding_forward<double>({-1}, 1, 1, table));
}

TEST_CASE("embedding backward accumulates duplicate ids") {
    DTensor grad_out({1, 2, 2}, {1, 2, 10, 20});
    auto g = embedding_backward<double>({3, 3}, grad_out, 4, 2);
    CHECK(g.data[3 * 2 + 0] == 11.0);
    CHECK(g.data[3 * 2 + 1] == 22.0);
    CHECK(g.data[0] == 0.0);
}

TEST_CASE("conv1d hand example") {
    DTensor x({1, 4, 1}, {1, 2, 3, 4});
    DTensor k({3, 1, 1}, {1, 0, -1});
    DTensor b({1}, {0});
    auto out = conv1d_forward(x, k, b);
    CHECK(out.shape == std::vector<int>{1, 2, 1});
    CHECK(out.data[0] == doctest::Approx(-2.0));
    CHECK(out.data[1] == doctest::Approx(-2.0));
}

TEST_CASE("conv1d output length and error cases") {
    Rng rng(1);
    auto x = random_tensor({2, 400, 3}, rng);
    auto k = random_tensor({3, 3, 5}, rng);
    auto b = random_tensor({5}, rng);
    CHECK(conv1d_forward(x, k, b).shape == std::vector<int>{2, 398, 5});

    auto short_x = random_tensor({1, 2, 3}, rng);
    CHECK_THROWS(conv1d_forward(short_x, k, b));
}

TEST_CASE("conv1d with zero kernel and bias annihilates") {
    Rng rng(2);
    auto x = random_tensor({2, 8, 3}, rng);
    DTensor k({3, 3, 4});
    DTensor b({4});
    for (double v : conv1d_forward(x, k, b).data) CHECK(v == 0.0);
}

TEST_CASE("conv1d gradient check") {
    Rng rng(3);
    auto x = random_tensor({2, 8, 2}, rng);
    auto k = random_tensor({3, 2, 3}, rng);
    auto b = random_tensor({3}, rng);
    auto coef = coefficients({2, 6, 3}, rng);
    auto loss = [&] { return dot(conv1d_forward(x, k, b), coef); };
    auto grads = conv1d_backward(x, k, coef);
    double err = gradient_check<double>(loss, {{&x, &grads.input},
                                              {&k, &grads.kernels},
                                              {&b, &grads.bias}});
    CHECK(err < 1e-4);
}

TEST_CASE("relu forward/backward") {
    DTensor x({3}, {-1, 0, 2});
    CHECK(relu(x).data == std::vector<double>{0, 0, 2});
    DTensor up({3}, {1, 1, 1});
    CHECK(relu_backward(x, up).data == std::vector<double>{0, 0, 1});
    CHECK(relu(relu(x)).data == relu(x).data);
}

TEST_CASE("global max pool forward, ties and permutation invariance") {
    DTensor x({1, 3, 1}, {-2, 5, 3});
    auto r = global_max_pool1d(x);
    CHECK(r.out.data[0] == 5.0);
    CHECK(r.argmax[0] == 1);

    DTensor tie({1, 2, 1}, {4, 4});
    auto rt = global_max_pool1d(tie);
    CHECK(rt.argmax[0] == 0);  // earliest argmax on ties
    DTensor up({1, 1}, {7});
    auto g = global_max_pool1d_backward(rt.argmax, up, 2);
    CHECK(g.data == std::vector<double>{7, 0});

    DTensor single({1, 1, 2}, {3, -4});
    auto rs = global_max_pool1d(single);
    CHECK(rs.out.data == std::vector<double>{3, -4});

    Rng rng(4);
    auto big = random_tensor({2, 7, 3}, rng);
    auto base = global_max_pool1d(big).out;
    DTensor reversed = big;
    const int T = 7, F = 3;
    for (int b = 0; b < 2; ++b)
        for (int t = 0; t < T; ++t)
            for (int f = 0; f < F; ++f)
                reversed.data[(b * T + t) * F + f] = big.data[(b * T + (T - 1 - t)) * F + f];
    CHECK(global_max_pool1d(reversed).out.data == base.data);
}

TEST_CASE("max pool gradient check") {
    Rng rng(5);
    auto x = random_tensor({2, 5, 3}, rng);
    auto coef = coefficients({2, 3}, rng);
    auto loss = [&] { return dot(global_max_pool1d(x).out, coef); };
    auto pool = global_max_pool1d(x);
    auto grad = global_max_pool1d_backward(pool.argmax, coef, 5);
    CHECK(gradient_check<double>(loss, {{&x, &grad}}) < 1e-4);
}

TEST_CASE("dense hand example and shape errors") {
    DTensor x({1, 2}, {1, 2});
    DTensor W({2, 1}, {1, 1});
    DTensor b({1}, {0.5});
    CHECK(dense_forward(x, W, b).data == std::vector<double>{3.5});

    DTensor bad_b({2}, {0, 0});
    CHECK_THROWS(dense_forward(x, W, bad_b));
}

TEST_CASE("dense gradient check") {
    Rng rng(6);
    auto x = random_tensor({3, 4}, rng);
    auto W = random_tensor({4, 2}, rng);
    auto b = random_tensor({2}, rng);
    auto coef = coefficients({3, 2}, rng);
    auto loss = [&] { return dot(dense_forward(x, W, b), coef); };
    auto g = dense_backward(x, W, coef);
    double err = gradient_check<double>(loss, {{&x, &g.input}, {&W, &g.weights}, {&b, &g.bias}});
    CHECK(err < 1e-4);
}

TEST_CASE("relu composed with dense gradient check") {
    Rng rng(7);
    auto x = random_tensor({3, 4}, rng);
    auto W = random_tensor({4, 2}, rng);
    auto b = random_tensor({2}, rng);
    auto coef = coefficients({3, 2}, rng);
    auto loss = [&] { return dot(relu(dense_forward(x, W, b)), coef); };
    auto pre = dense_forward(x, W, b);
    auto g = dense_backward(x, W, relu_backward(pre, coef));
    double err = gradient_check<double>(loss, {{&x, &g.input}, {&W, &g.weights}, {&b, &g.bias}});
    CHECK(err < 1e-4);
}

TEST_CASE("gradient check is near machine precision for a linear map") {
    Rng rng(8);
    auto x = random_tensor({2, 3}, rng);
    DTensor grad = x;
    for (double& v : grad.data) v = 2.0;
    auto loss = [&] { return 2.0 * std::accumulate(x.data.begin(), x.data.end(), 0.0); };
    CHECK(gradient_check<double>(loss, {{&x, &grad}}) < 1e-10);
}

TEST_CASE("dropout eval and rate-zero identities") {
    Rng rng(9);
    auto x = random_tensor({4, 5}, rng);
    Rng drop_rng(1);
    CHECK(dropout(x, 0.5, false, drop_rng).data == x.data);
    CHECK(dropout(x, 0.0, true, drop_rng).data == x.data);
    CHECK_THROWS(dropout(x, 1.0, true, drop_rng));
    CHECK_THROWS(dropout(x, -0.1, false, drop_rng));
}

TEST_CASE("inverted dropout is unbiased (Monte Carlo)") {
    const double rate = 0.2;
    const int draws = 20000;
    DTensor x({1, 1}, {1.0});
    Rng rng(10);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
        double v = dropout(x, rate, true, rng).data[0];
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / draws;
    double var = sumsq / draws - mean * mean;
    double sigma = std::sqrt(var / draws);
    CHECK(std::abs(mean - 1.0) < 3.0 * sigma);
}

TEST_CASE("dropout masks zero ~rate of units and scale survivors") {
    Rng rng(11);
    auto mask = make_dropout_mask<double>(10000, 0.2, rng);
    std::size_t zeros = 0;
    for (double v : mask) {
        if (v == 0.0) ++zeros;
        else CHECK(v == doctest::Approx(1.25));
    }
    CHECK(zeros > 1800);
    CHECK(zeros < 2200);
}

TEST_CASE("softmax cross entropy values") {
    DTensor logits({1, 3}, {0, 0, 0});
    DTensor target({1, 3}, {1, 0, 0});
    auto r = softmax_cross_entropy(logits, target);
    for (double p : r.probs.data) CHECK(p == doctest::Approx(1.0 / 3.0));
    CHECK(r.loss == doctest::Approx(std::log(3.0)));

    // Predicted probability 0.5 for the true class -> loss ln 2.
    DTensor l2({1, 3}, {std::log(2.0), std::log(1.0), std::log(1.0)});
    auto r2 = softmax_cross_entropy(l2, target);
    CHECK(r2.probs.data[0] == doctest::Approx(0.5));
    CHECK(r2.loss == doctest::Approx(std::log(2.0)));
}

TEST_CASE("softmax gradient closed form and finite differences") {
    DTensor logits({1, 3}, {0, 0, 0});
    DTensor target({1, 3}, {1, 0, 0});
    auto r = softmax_cross_entropy(logits, target);
    auto g = softmax_cross_entropy_backward(r.probs, target);
    CHECK(g.data[0] == doctest::Approx(1.0 / 3.0 - 1.0));
    CHECK(g.data[1] == doctest::Approx(1.0 / 3.0));
    CHECK(g.data[2] == doctest::Approx(1.0 / 3.0));

    Rng rng(12);
    auto l = random_tensor({4, 3}, rng);
    DTensor t({4, 3});
    for (int i = 0; i < 4; ++i) t.data[i * 3 + static_cast<int>(rng.bounded(3))] = 1.0;
    auto loss = [&] { return softmax_cross_entropy(l, t).loss; };
    auto grad = softmax_cross_entropy_backward(softmax_cross_entropy(l, t).probs, t);
    CHECK(gradient_check<double>(loss, {{&l, &grad}}) < 1e-4);
}

TEST_CASE("softmax rows sum to one for extreme logits") {
    DTensor logits({2, 3}, {1000, -1000, 0, 50, 50, 50});
    auto p = softmax(logits);
    for (int i = 0; i < 2; ++i) {
        double s = p.data[i * 3] + p.data[i * 3 + 1] + p.data[i * 3 + 2];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("embedding gradient check") {
    Rng rng(13);
    auto table = random_tensor({5, 3}, rng);
    std::vector<int> ids{1, 4, 1, 0};  // duplicate id exercises accumulation
    auto coef = coefficients({1, 4, 3}, rng);
    auto loss = [&] { return dot(embedding_forward(ids, 1, 4, table), coef); };
    auto grad = embedding_backward(ids, coef, 5, 3);
    CHECK(gradient_check<double>(loss, {{&table, &grad}}) < 1e-4);
}
