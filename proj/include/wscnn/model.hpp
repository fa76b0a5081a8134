#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wscnn/features.hpp"
#include "wscnn/labeler.hpp"
#include "wscnn/nn.hpp"

namespace wscnn::model {

struct ModelConfig {
    int vocab = 5000;
    int embed_dim = 50;
    int maxlen = 400;
    int filters = 250;
    int kernel = 3;
    int hidden = 250;
    int classes = 3;
    double dropout_rate = 0.2;

    void validate() const;
    bool operator==(const ModelConfig&) const = default;
};

struct ParamCounts {
    std::size_t embedding = 0;
    std::size_t conv = 0;
    std::size_t dense = 0;
    std::size_t output = 0;
    std::size_t total = 0;
};

// Layer stack: embedding -> dropout -> conv1d+relu -> global max pool
// -> dense+relu -> dropout -> dense -> softmax. Activations are folded
// into their preceding layers.
template <typename T>
struct ModelT {
    ModelConfig config;
    nn::TensorT<T> embedding;  // V x D, row 0 starts at zero (padding)
    nn::TensorT<T> conv_w;     // K x D x F
    nn::TensorT<T> conv_b;     // F
    nn::TensorT<T> dense_w;    // F x H
    nn::TensorT<T> dense_b;    // H
    nn::TensorT<T> out_w;      // H x classes
    nn::TensorT<T> out_b;      // classes

    std::vector<nn::TensorT<T>*> params() {
        return {&embedding, &conv_w, &conv_b, &dense_w, &dense_b, &out_w, &out_b};
    }
    std::vector<const nn::TensorT<T>*> params() const {
        return {&embedding, &conv_w, &conv_b, &dense_w, &dense_b, &out_w, &out_b};
    }
    static const char* param_name(std::size_t i) {
        static const char* names[] = {"embedding", "conv_w", "conv_b", "dense_w",
                                      "dense_b",   "out_w",  "out_b"};
        return names[i];
    }

    template <typename U>
    ModelT<U> cast() const {
        return ModelT<U>{config,
                         embedding.template cast<U>(),
                         conv_w.template cast<U>(),
                         conv_b.template cast<U>(),
                         dense_w.template cast<U>(),
                         dense_b.template cast<U>(),
                         out_w.template cast<U>(),
                         out_b.template cast<U>()};
    }
};

using Model = ModelT<float>;

template <typename T>
struct ForwardCache {
    std::vector<int> ids;
    int batch = 0;
    nn::TensorT<T> emb_dropped;   // conv input (post first dropout)
    nn::TensorT<T> conv_pre;      // pre-relu conv output
    nn::TensorT<T> pooled;
    nn::TensorT<T> dense_pre;     // pre-relu hidden
    nn::TensorT<T> hidden_dropped;  // output-layer input (post second dropout)
    nn::TensorT<T> logits;
    std::vector<int> pool_argmax;
    std::vector<T> mask_embed;    // empty in eval mode
    std::vector<T> mask_hidden;
};

template <typename T>
struct ParamGrads {
    nn::TensorT<T> embedding, conv_w, conv_b, dense_w, dense_b, out_w, out_b;
    std::vector<const nn::TensorT<T>*> list() const {
        return {&embedding, &conv_w, &conv_b, &dense_w, &dense_b, &out_w, &out_b};
    }
};

void check_ids(const std::vector<int>& ids, int batch, const ModelConfig& cfg);

// Parameters drawn in a fixed order from the seed: embedding uniform in
// [-0.05, 0.05] (padding row zeroed afterwards), conv and dense weights
// Glorot-uniform, biases zero.
Model build_model(const ModelConfig& config, std::uint64_t seed);

ParamCounts param_count(const ModelConfig& config);

template <typename T>
nn::TensorT<T> forward_logits(const ModelT<T>& m, const std::vector<int>& ids, int batch,
                              bool train, Rng* rng, ForwardCache<T>* cache) {
    const ModelConfig& c = m.config;
    check_ids(ids, batch, c);
    auto emb = nn::embedding_forward(ids, batch, c.maxlen, m.embedding);
    std::vector<T> mask_embed, mask_hidden;
    if (train && c.dropout_rate > 0.0) {
        mask_embed = nn::make_dropout_mask<T>(emb.size(), c.dropout_rate, *rng);
        emb = nn::apply_mask(emb, mask_embed);
    }
    auto conv_pre = nn::conv1d_forward(emb, m.conv_w, m.conv_b);
    auto conv_act = nn::relu(conv_pre);
    auto pool = nn::global_max_pool1d(conv_act);
    auto dense_pre = nn::dense_forward(pool.out, m.dense_w, m.dense_b);
    auto hidden = nn::relu(dense_pre);
    if (train && c.dropout_rate > 0.0) {
        mask_hidden = nn::make_dropout_mask<T>(hidden.size(), c.dropout_rate, *rng);
        hidden = nn::apply_mask(hidden, mask_hidden);
    }
    auto logits = nn::dense_forward(hidden, m.out_w, m.out_b);
    if (cache) {
        cache->ids = ids;
        cache->batch = batch;
        cache->emb_dropped = std::move(emb);
        cache->conv_pre = std::move(conv_pre);
        cache->pooled = std::move(pool.out);
        cache->dense_pre = std::move(dense_pre);
        cache->hidden_dropped = std::move(hidden);
        cache->logits = logits;
        cache->pool_argmax = std::move(pool.argmax);
        cache->mask_embed = std::move(mask_embed);
        cache->mask_hidden = std::move(mask_hidden);
    }
    return logits;
}

// Softmax probabilities, rows summing to 1.
template <typename T>
nn::TensorT<T> forward(const ModelT<T>& m, const std::vector<int>& ids, int batch,
                       bool train = false, Rng* rng = nullptr,
                       ForwardCache<T>* cache = nullptr) {
    return nn::softmax(forward_logits(m, ids, batch, train, rng, cache));
}

template <typename T>
ParamGrads<T> backward(const ModelT<T>& m, const ForwardCache<T>& cache,
                       const nn::TensorT<T>& probs, const nn::TensorT<T>& targets) {
    const ModelConfig& c = m.config;
    auto grad_logits = nn::softmax_cross_entropy_backward(probs, targets);
    auto g_out = nn::dense_backward(cache.hidden_dropped, m.out_w, grad_logits);
    auto grad_hidden = std::move(g_out.input);
    if (!cache.mask_hidden.empty()) grad_hidden = nn::apply_mask(grad_hidden, cache.mask_hidden);
    auto grad_dense_pre = nn::relu_backward(cache.dense_pre, grad_hidden);
    auto g_dense = nn::dense_backward(cache.pooled, m.dense_w, grad_dense_pre);
    const int time_steps = c.maxlen - c.kernel + 1;
    auto grad_conv_act = nn::global_max_pool1d_backward(cache.pool_argmax, g_dense.input, time_steps);
    auto grad_conv_pre = nn::relu_backward(cache.conv_pre, grad_conv_act);
    auto g_conv = nn::conv1d_backward(cache.emb_dropped, m.conv_w, grad_conv_pre);
    auto grad_emb = std::move(g_conv.input);
    if (!cache.mask_embed.empty()) grad_emb = nn::apply_mask(grad_emb, cache.mask_embed);
    auto grad_table = nn::embedding_backward(cache.ids, grad_emb, c.vocab, c.embed_dim);
    return ParamGrads<T>{std::move(grad_table), std::move(g_conv.kernels),
                         std::move(g_conv.bias), std::move(g_dense.weights),
                         std::move(g_dense.bias), std::move(g_out.weights),
                         std::move(g_out.bias)};
}

// Argmax over eval-mode probabilities, earliest index on ties,
// mapped (0, 1, 2) -> (-1, 0, 1).
std::vector<labeler::TriLabel> predict(const Model& m, const std::vector<int>& ids, int batch);

std::vector<labeler::TriLabel> argmax_labels(const nn::Tensor& probs);

// Model file: magic `WSCNN`, version u16, length-prefixed UTF-8 header
// (config fields and tensor manifest), raw little-endian float32 buffers,
// trailing CRC-32 of all preceding bytes.
void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

}  // namespace wscnn::model
