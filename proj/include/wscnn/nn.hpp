#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "wscnn/rng.hpp"
#include "wscnn/tensor.hpp"

// Forward and backward passes for each layer of the stack. All reductions
// accumulate in 64-bit and round to the storage type at store.
namespace wscnn::nn {

// ---------------------------------------------------------------- embedding

// ids: B*L row-major, table: V x D -> out B x L x D.
template <typename T>
TensorT<T> embedding_forward(const std::vector<int>& ids, int B, int L,
                             const TensorT<T>& table) {
    const int V = table.shape[0], D = table.shape[1];
    if (ids.size() != static_cast<std::size_t>(B) * L)
        throw std::invalid_argument("embedding: id batch does not match B*L");
    TensorT<T> out({B, L, D});
    for (std::size_t p = 0; p < ids.size(); ++p) {
        int id = ids[p];
        if (id < 0 || id >= V) throw std::out_of_range("embedding id out of range");
        std::copy_n(table.data.begin() + static_cast<std::size_t>(id) * D, D,
                    out.data.begin() + p * D);
    }
    return out;
}

// Scatters upstream gradients into table rows, accumulating duplicates.
template <typename T>
TensorT<T> embedding_backward(const std::vector<int>& ids, const TensorT<T>& grad_out,
                              int V, int D) {
    std::vector<double> acc(static_cast<std::size_t>(V) * D, 0.0);
    for (std::size_t p = 0; p < ids.size(); ++p) {
        double* row = acc.data() + static_cast<std::size_t>(ids[p]) * D;
        const T* g = grad_out.data.data() + p * D;
        for (int d = 0; d < D; ++d) row[d] += g[d];
    }
    TensorT<T> grad_table({V, D});
    for (std::size_t i = 0; i < acc.size(); ++i)
        grad_table.data[i] = static_cast<T>(acc[i]);
    return grad_table;
}

// ------------------------------------------------------------------- conv1d

// Valid padding, stride 1. x: B x L x C, kernels: K x C x F, bias: F
// -> out B x (L-K+1) x F.
template <typename T>
TensorT<T> conv1d_forward(const TensorT<T>& x, const TensorT<T>& kernels,
                          const TensorT<T>& bias) {
    const int B = x.shape[0], L = x.shape[1], C = x.shape[2];
    const int K = kernels.shape[0], F = kernels.shape[2];
    if (kernels.shape[1] != C) throw std::invalid_argument("conv1d: channel mismatch");
    if (bias.shape[0] != F) throw std::invalid_argument("conv1d: bias size mismatch");
    if (L < K) throw std::invalid_argument("conv1d: input shorter than kernel");
    const int Tn = L - K + 1;
    TensorT<T> out({B, Tn, F});
    for (int b = 0; b < B; ++b) {
        for (int t = 0; t < Tn; ++t) {
            T* o = &out.data[(static_cast<std::size_t>(b) * Tn + t) * F];
            for (int f = 0; f < F; ++f) {
                double acc = bias.data[f];
                for (int k = 0; k < K; ++k) {
                    const T* xr = &x.data[(static_cast<std::size_t>(b) * L + t + k) * C];
                    const T* kr = &kernels.data[(static_cast<std::size_t>(k) * C) * F + f];
                    for (int c = 0; c < C; ++c)
                        acc += static_cast<double>(xr[c]) * kr[static_cast<std::size_t>(c) * F];
                }
                o[f] = static_cast<T>(acc);
            }
        }
    }
    return out;
}

template <typename T>
struct Conv1dGrads {
    TensorT<T> input;
    TensorT<T> kernels;
    TensorT<T> bias;
};

template <typename T>
Conv1dGrads<T> conv1d_backward(const TensorT<T>& x, const TensorT<T>& kernels,
                               const TensorT<T>& grad_out) {
    const int B = x.shape[0], L = x.shape[1], C = x.shape[2];
    const int K = kernels.shape[0], F = kernels.shape[2];
    const int Tn = L - K + 1;
    std::vector<double> gx(x.size(), 0.0), gk(kernels.size(), 0.0), gb(F, 0.0);
    for (int b = 0; b < B; ++b) {
        for (int t = 0; t < Tn; ++t) {
            const T* g = &grad_out.data[(static_cast<std::size_t>(b) * Tn + t) * F];
            for (int f = 0; f < F; ++f) gb[f] += g[f];
            for (int k = 0; k < K; ++k) {
                const std::size_t xoff = (static_cast<std::size_t>(b) * L + t + k) * C;
                for (int c = 0; c < C; ++c) {
                    const std::size_t koff = (static_cast<std::size_t>(k) * C + c) * F;
                    double xv = x.data[xoff + c];
                    double gxa = 0.0;
                    for (int f = 0; f < F; ++f) {
                        gk[koff + f] += xv * g[f];
                        gxa += static_cast<double>(kernels.data[koff + f]) * g[f];
                    }
                    gx[xoff + c] += gxa;
                }
            }
        }
    }
    Conv1dGrads<T> grads{TensorT<T>(x.shape), TensorT<T>(kernels.shape),
                         TensorT<T>({F})};
    for (std::size_t i = 0; i < gx.size(); ++i) grads.input.data[i] = static_cast<T>(gx[i]);
    for (std::size_t i = 0; i < gk.size(); ++i) grads.kernels.data[i] = static_cast<T>(gk[i]);
    for (int f = 0; f < F; ++f) grads.bias.data[f] = static_cast<T>(gb[f]);
    return grads;
}

// --------------------------------------------------------------------- relu

template <typename T>
TensorT<T> relu(const TensorT<T>& x) {
    TensorT<T> out = x;
    for (T& v : out.data) v = std::max(v, T(0));
    return out;
}

// Gradient is 0 at exactly 0.
template <typename T>
TensorT<T> relu_backward(const TensorT<T>& x, const TensorT<T>& grad_out) {
    TensorT<T> grad = grad_out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x.data[i] > T(0))) grad.data[i] = T(0);
    return grad;
}

// ---------------------------------------------------------- global max pool

template <typename T>
struct MaxPoolResult {
    TensorT<T> out;               // B x F
    std::vector<int> argmax;      // B*F, earliest index on ties
};

template <typename T>
MaxPoolResult<T> global_max_pool1d(const TensorT<T>& x) {
    const int B = x.shape[0], Tn = x.shape[1], F = x.shape[2];
    MaxPoolResult<T> r{TensorT<T>({B, F}), std::vector<int>(static_cast<std::size_t>(B) * F, 0)};
    for (int b = 0; b < B; ++b) {
        for (int f = 0; f < F; ++f) {
            T best = x.data[(static_cast<std::size_t>(b) * Tn) * F + f];
            int best_t = 0;
            for (int t = 1; t < Tn; ++t) {
                T v = x.data[(static_cast<std::size_t>(b) * Tn + t) * F + f];
                if (v > best) {
                    best = v;
                    best_t = t;
                }
            }
            r.out.data[static_cast<std::size_t>(b) * F + f] = best;
            r.argmax[static_cast<std::size_t>(b) * F + f] = best_t;
        }
    }
    return r;
}

template <typename T>
TensorT<T> global_max_pool1d_backward(const std::vector<int>& argmax,
                                      const TensorT<T>& grad_out, int time_steps) {
    const int B = grad_out.shape[0], F = grad_out.shape[1];
    TensorT<T> grad({B, time_steps, F});
    for (int b = 0; b < B; ++b)
        for (int f = 0; f < F; ++f) {
            int t = argmax[static_cast<std::size_t>(b) * F + f];
            grad.data[(static_cast<std::size_t>(b) * time_steps + t) * F + f] =
                grad_out.data[static_cast<std::size_t>(b) * F + f];
        }
    return grad;
}

// -------------------------------------------------------------------- dense

// x: B x N, W: N x M, b: M -> out B x M.
template <typename T>
TensorT<T> dense_forward(const TensorT<T>& x, const TensorT<T>& W, const TensorT<T>& b) {
    const int B = x.shape[0], N = x.shape[1], M = W.shape[1];
    if (W.shape[0] != N || b.shape[0] != M)
        throw std::invalid_argument("dense: shape mismatch");
    TensorT<T> out({B, M});
    for (int i = 0; i < B; ++i) {
        for (int j = 0; j < M; ++j) {
            double acc = b.data[j];
            for (int k = 0; k < N; ++k)
                acc += static_cast<double>(x.data[static_cast<std::size_t>(i) * N + k]) *
                       W.data[static_cast<std::size_t>(k) * M + j];
            out.data[static_cast<std::size_t>(i) * M + j] = static_cast<T>(acc);
        }
    }
    return out;
}

template <typename T>
struct DenseGrads {
    TensorT<T> input;
    TensorT<T> weights;
    TensorT<T> bias;
};

template <typename T>
DenseGrads<T> dense_backward(const TensorT<T>& x, const TensorT<T>& W,
                             const TensorT<T>& grad_out) {
    const int B = x.shape[0], N = x.shape[1], M = W.shape[1];
    DenseGrads<T> g{TensorT<T>({B, N}), TensorT<T>({N, M}), TensorT<T>({M})};
    std::vector<double> gW(W.size(), 0.0), gb(M, 0.0);
    for (int i = 0; i < B; ++i) {
        const T* go = &grad_out.data[static_cast<std::size_t>(i) * M];
        for (int j = 0; j < M; ++j) gb[j] += go[j];
        for (int k = 0; k < N; ++k) {
            double xv = x.data[static_cast<std::size_t>(i) * N + k];
            double gxa = 0.0;
            for (int j = 0; j < M; ++j) {
                gW[static_cast<std::size_t>(k) * M + j] += xv * go[j];
                gxa += static_cast<double>(W.data[static_cast<std::size_t>(k) * M + j]) * go[j];
            }
            g.input.data[static_cast<std::size_t>(i) * N + k] = static_cast<T>(gxa);
        }
    }
    for (std::size_t i = 0; i < gW.size(); ++i) g.weights.data[i] = static_cast<T>(gW[i]);
    for (int j = 0; j < M; ++j) g.bias.data[j] = static_cast<T>(gb[j]);
    return g;
}

// ------------------------------------------------------------------ dropout

// Inverted dropout: each unit is zeroed independently with probability
// `rate`; survivors are scaled by 1/(1-rate). Mask entries are the applied
// factor, so the backward pass is an elementwise product with the mask.
template <typename T>
std::vector<T> make_dropout_mask(std::size_t n, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0))
        throw std::invalid_argument("dropout rate must be in [0, 1)");
    std::vector<T> mask(n);
    const T scale = static_cast<T>(1.0 / (1.0 - rate));
    for (std::size_t i = 0; i < n; ++i)
        mask[i] = (rng.uniform01() < rate) ? T(0) : scale;
    return mask;
}

template <typename T>
TensorT<T> apply_mask(const TensorT<T>& x, const std::vector<T>& mask) {
    TensorT<T> out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= mask[i];
    return out;
}

template <typename T>
TensorT<T> dropout(const TensorT<T>& x, double rate, bool train, Rng& rng) {
    if (!train || rate == 0.0) {
        if (!(rate >= 0.0 && rate < 1.0))
            throw std::invalid_argument("dropout rate must be in [0, 1)");
        return x;
    }
    return apply_mask(x, make_dropout_mask<T>(x.size(), rate, rng));
}

// ------------------------------------------------- softmax + cross-entropy

template <typename T>
struct SoftmaxLoss {
    double loss = 0.0;   // mean over the batch
    TensorT<T> probs;    // B x C
};

// Row-wise stable softmax; per-example loss is -log of the true-class
// probability, clamped to >= 1e-7 before the log.
template <typename T>
SoftmaxLoss<T> softmax_cross_entropy(const TensorT<T>& logits, const TensorT<T>& targets) {
    const int B = logits.shape[0], C = logits.shape[1];
    if (targets.shape != logits.shape)
        throw std::invalid_argument("softmax: target shape mismatch");
    SoftmaxLoss<T> r{0.0, TensorT<T>({B, C})};
    double total = 0.0;
    for (int i = 0; i < B; ++i) {
        const T* row = &logits.data[static_cast<std::size_t>(i) * C];
        double mx = row[0];
        for (int j = 1; j < C; ++j) mx = std::max(mx, static_cast<double>(row[j]));
        double z = 0.0;
        for (int j = 0; j < C; ++j) z += std::exp(row[j] - mx);
        for (int j = 0; j < C; ++j) {
            double p = std::exp(row[j] - mx) / z;
            r.probs.data[static_cast<std::size_t>(i) * C + j] = static_cast<T>(p);
            if (targets.data[static_cast<std::size_t>(i) * C + j] > T(0.5))
                total -= std::log(std::max(p, 1e-7));
        }
    }
    r.loss = total / B;
    return r;
}

template <typename T>
TensorT<T> softmax(const TensorT<T>& logits) {
    TensorT<T> zero(logits.shape);
    return softmax_cross_entropy(logits, zero).probs;
}

// d(loss)/d(logits) = (probs - targets) / B.
template <typename T>
TensorT<T> softmax_cross_entropy_backward(const TensorT<T>& probs, const TensorT<T>& targets) {
    const int B = probs.shape[0];
    TensorT<T> grad = probs;
    for (std::size_t i = 0; i < grad.size(); ++i)
        grad.data[i] = static_cast<T>((static_cast<double>(probs.data[i]) - targets.data[i]) / B);
    return grad;
}

// ----------------------------------------------------------- gradient check

// Central finite differences against analytic gradients. `loss` recomputes
// the scalar objective from the tensors' current contents; each checked
// tensor is perturbed elementwise by +-epsilon. Returns the max over all
// elements of |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
template <typename T>
double gradient_check(
    const std::function<double()>& loss,
    const std::vector<std::pair<TensorT<T>*, const TensorT<T>*>>& tensors_and_grads,
    double epsilon = 1e-3) {
    double worst = 0.0;
    for (auto& [tensor, analytic] : tensors_and_grads) {
        for (std::size_t i = 0; i < tensor->size(); ++i) {
            const T saved = tensor->data[i];
            tensor->data[i] = static_cast<T>(saved + epsilon);
            double up = loss();
            tensor->data[i] = static_cast<T>(saved - epsilon);
            double down = loss();
            tensor->data[i] = saved;
            double numeric = (up - down) / (2.0 * epsilon);
            double a = analytic->data[i];
            double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

}  // namespace wscnn::nn
