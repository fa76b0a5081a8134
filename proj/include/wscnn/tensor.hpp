#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace wscnn::nn {

// Shape plus a contiguous row-major buffer. The float instantiation is the
// sole numeric carrier of the pipeline; the double instantiation exists for
// finite-difference verification.
template <typename T>
struct TensorT {
    std::vector<int> shape;
    std::vector<T> data;

    TensorT() = default;
    explicit TensorT(std::vector<int> s) : shape(std::move(s)) {
        data.assign(element_count(shape), T(0));
    }
    TensorT(std::vector<int> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != element_count(shape))
            throw std::invalid_argument("tensor buffer length does not match shape");
    }

    static std::size_t element_count(const std::vector<int>& s) {
        std::size_t n = 1;
        for (int d : s) {
            if (d <= 0) throw std::invalid_argument("tensor dimensions must be positive");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::size_t size() const { return data.size(); }
    T* begin() { return data.data(); }
    T* end() { return data.data() + data.size(); }

    template <typename U>
    TensorT<U> cast() const {
        TensorT<U> out;
        out.shape = shape;
        out.data.reserve(data.size());
        for (T v : data) out.data.push_back(static_cast<U>(v));
        return out;
    }

    bool operator==(const TensorT&) const = default;
};

using Tensor = TensorT<float>;
using DTensor = TensorT<double>;

}  // namespace wscnn::nn
