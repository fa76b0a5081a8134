#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wscnn/model.hpp"

using namespace wscnn;
using namespace wscnn::model;

namespace {

ModelConfig tiny_config() {
    ModelConfig c;
    c.vocab = 20;
    c.embed_dim = 4;
    c.maxlen = 8;
    c.filters = 3;
    c.kernel = 3;
    c.hidden = 5;
    return c;
}

}  // namespace

TEST_CASE("param_count reproduces the reference layer table") {
    auto p = param_count(ModelConfig{});
    CHECK(p.embedding == 250000);
    CHECK(p.conv == 37750);
    CHECK(p.dense == 62750);
    CHECK(p.output == 753);
    CHECK(p.total == 351253);
}

TEST_CASE("param_count formula on a small config") {
    ModelConfig c;
    c.vocab = 10;
    c.embed_dim = 2;
    c.filters = 3;
    c.kernel = 3;
    c.hidden = 4;
    auto p = param_count(c);
    CHECK(p.embedding == 20);
    CHECK(p.conv == 21);
    CHECK(p.dense == 16);
    CHECK(p.output == 15);
}

TEST_CASE("param_count matches allocated parameter elements") {
    for (auto cfg : {ModelConfig{}, tiny_config()}) {
        if (cfg.vocab == 5000) {
            cfg.vocab = 300;  // keep the allocation small; formulas scale
        }
        auto m = build_model(cfg, 1);
        auto p = param_count(cfg);
        std::size_t allocated = 0;
        for (const auto* t : m.params()) allocated += t->size();
        CHECK(p.total == allocated);
        CHECK(p.embedding == m.embedding.size());
        CHECK(p.conv == m.conv_w.size() + m.conv_b.size());
        CHECK(p.dense == m.dense_w.size() + m.dense_b.size());
        CHECK(p.output == m.out_w.size() + m.out_b.size());
    }
}

TEST_CASE("build_model shapes match the layer table") {
    auto cfg = ModelConfig{};
    cfg.vocab = 5000;
    auto m = build_model(cfg, 3);
    CHECK(m.embedding.shape == std::vector<int>{5000, 50});
    CHECK(m.conv_w.shape == std::vector<int>{3, 50, 250});
    CHECK(m.dense_w.shape == std::vector<int>{250, 250});
    CHECK(m.out_w.shape == std::vector<int>{250, 3});
    // Conv output length 400 - 3 + 1 = 398.
    CHECK(m.config.maxlen - m.config.kernel + 1 == 398);
}

TEST_CASE("build_model is deterministic and zeroes the padding row") {
    auto a = build_model(tiny_config(), 77);
    auto b = build_model(tiny_config(), 77);
    CHECK(a.embedding == b.embedding);
    CHECK(a.conv_w == b.conv_w);
    CHECK(a.out_w == b.out_w);
    CHECK(build_model(tiny_config(), 78).conv_w != a.conv_w);
    for (int d = 0; d < a.config.embed_dim; ++d) CHECK(a.embedding.data[d] == 0.0f);
}

TEST_CASE("build_model rejects invalid configs") {
    auto c = tiny_config();
    c.kernel = c.maxlen + 1;
    CHECK_THROWS(build_model(c, 0));
    c = tiny_config();
    c.classes = 2;
    CHECK_THROWS(build_model(c, 0));
}

TEST_CASE("forward rows sum to 1 and eval mode is deterministic") {
    auto m = build_model(tiny_config(), 5);
    std::vector<int> ids(2 * 8);
    ids[3] = 7;
    ids[11] = 19;
    auto p = forward(m, ids, 2);
    REQUIRE(p.shape == std::vector<int>{2, 3});
    for (int i = 0; i < 2; ++i)
        CHECK(p.data[i * 3] + p.data[i * 3 + 1] + p.data[i * 3 + 2] ==
              doctest::Approx(1.0).epsilon(1e-5));
    CHECK(forward(m, ids, 2).data == p.data);

    std::vector<int> bad = ids;
    bad[0] = 20;
    CHECK_THROWS(forward(m, bad, 2));
}

TEST_CASE("identical all-padding rows produce identical probabilities") {
    auto m = build_model(tiny_config(), 6);
    std::vector<int> ids(2 * 8, 0);
    auto p = forward(m, ids, 2);
    for (int j = 0; j < 3; ++j) CHECK(p.data[j] == p.data[3 + j]);
}

TEST_CASE("fresh tiny model predicts near-uniform probabilities") {
    auto m = build_model(tiny_config(), 7);
    std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8};
    auto p = forward(m, ids, 1);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(p.data[j] - 1.0 / 3.0) < 0.05);
}

TEST_CASE("predict takes the earliest argmax and maps to trilabels") {
    nn::Tensor probs({2, 3}, {0.2f, 0.3f, 0.5f, 0.4f, 0.4f, 0.2f});
    auto labels = argmax_labels(probs);
    CHECK(labels[0] == labeler::TriLabel::Positive);
    CHECK(labels[1] == labeler::TriLabel::Negative);  // tie -> earliest index
}

TEST_CASE("predict agrees with argmax of eval forward") {
    auto m = build_model(tiny_config(), 8);
    Rng rng(1);
    std::vector<int> ids(3 * 8);
    for (int& id : ids) id = static_cast<int>(rng.bounded(20));
    CHECK(predict(m, ids, 3) == argmax_labels(forward(m, ids, 3)));
}

TEST_CASE("predict is invariant under monotone logit shifts") {
    auto m = build_model(tiny_config(), 9);
    std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8};
    auto logits = forward_logits(m, ids, 1, false, nullptr, (ForwardCache<float>*)nullptr);
    auto base = argmax_labels(nn::softmax(logits));
    for (float shift : {-3.0f, 0.5f, 10.0f}) {
        auto shifted = logits;
        for (float& v : shifted.data) v = 2.0f * v + shift;  // strictly monotone
        CHECK(argmax_labels(nn::softmax(shifted)) == base);
    }
}

TEST_CASE("full tiny-stack gradient check") {
    auto fm = build_model(tiny_config(), 17);
    auto m = fm.cast<double>();
    Rng rng(2);
    std::vector<int> ids(2 * 8);
    for (int& id : ids) id = static_cast<int>(rng.bounded(20));
    nn::DTensor targets({2, 3});
    targets.data[0] = 1.0;
    targets.data[3 + 2] = 1.0;

    auto loss = [&] {
        auto logits = forward_logits(m, ids, 2, false, nullptr, (ForwardCache<double>*)nullptr);
        return nn::softmax_cross_entropy(logits, targets).loss;
    };
    ForwardCache<double> cache;
    auto logits = forward_logits(m, ids, 2, false, nullptr, &cache);
    auto probs = nn::softmax(logits);
    auto grads = model::backward(m, cache, probs, targets);

    auto params = m.params();
    auto grad_list = grads.list();
    std::vector<std::pair<nn::DTensor*, const nn::DTensor*>> pairs;
    for (std::size_t i = 0; i < params.size(); ++i) pairs.emplace_back(params[i], grad_list[i]);
    CHECK(nn::gradient_check<double>(loss, pairs) < 1e-4);
}

TEST_CASE("model file round-trips bitwise") {
    auto m = build_model(tiny_config(), 23);
    auto path = (std::filesystem::temp_directory_path() / "model_rt.wscnn").string();
    save_model(m, path);
    auto loaded = load_model(path);
    CHECK(loaded.config == m.config);
    auto a = m.params();
    auto b = loaded.params();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i]->data == b[i]->data);
}

TEST_CASE("model file detects corruption") {
    auto m = build_model(tiny_config(), 29);
    auto path = (std::filesystem::temp_directory_path() / "model_bad.wscnn").string();
    save_model(m, path);

    SUBCASE("bad magic") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXXX", 5);
        f.close();
        CHECK_THROWS(load_model(path));
    }
    SUBCASE("flipped payload byte fails the checksum") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(64);
        f.put('\x5a');
        f.close();
        CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("checksum"), std::runtime_error);
    }
    SUBCASE("truncation") {
        auto size = std::filesystem::file_size(path);
        std::filesystem::resize_file(path, size / 2);
        CHECK_THROWS(load_model(path));
    }
}

TEST_CASE("model file carries its own config") {
    auto cfg = tiny_config();
    cfg.vocab = 33;
    cfg.maxlen = 10;
    auto m = build_model(cfg, 31);
    auto path = (std::filesystem::temp_directory_path() / "model_cfg.wscnn").string();
    save_model(m, path);
    auto loaded = load_model(path);
    CHECK(loaded.config.vocab == 33);
    CHECK(loaded.config.maxlen == 10);
}
