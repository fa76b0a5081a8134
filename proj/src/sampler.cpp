#include "wscnn/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wscnn/rng.hpp"

namespace wscnn::sampler {

namespace {

int class_slot(labeler::TriLabel l) { return labeler::to_int(l) + 1; }

std::array<std::vector<std::size_t>, 3> indices_by_class(
    const std::vector<LabeledExample>& data) {
    std::array<std::vector<std::size_t>, 3> by_class;
    for (std::size_t i = 0; i < data.size(); ++i)
        by_class[class_slot(data[i].label)].push_back(i);
    return by_class;
}

void require_all_classes(const std::array<std::vector<std::size_t>, 3>& by_class) {
    static const char* names[3] = {"-1", "0", "1"};
    for (int c = 0; c < 3; ++c)
        if (by_class[c].empty())
            throw std::runtime_error(std::string("class ") + names[c] +
                                     " is absent from the data");
}

}  // namespace

SplitPair split(const std::vector<LabeledExample>& data, double ratio, std::uint64_t seed) {
    if (data.empty()) throw std::runtime_error("cannot split an empty dataset");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::runtime_error("split ratio must be in (0, 1)");
    std::vector<std::size_t> perm(data.size());
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(data.size())));
    SplitPair out;
    out.train_indices.assign(perm.begin(), perm.begin() + n_train);
    out.test_indices.assign(perm.begin() + n_train, perm.end());
    out.train.reserve(n_train);
    out.test.reserve(data.size() - n_train);
    for (auto i : out.train_indices) out.train.push_back(data[i]);
    for (auto i : out.test_indices) out.test.push_back(data[i]);
    return out;
}

std::vector<LabeledExample> oversample(const std::vector<LabeledExample>& train,
                                       std::uint64_t seed) {
    auto by_class = indices_by_class(train);
    require_all_classes(by_class);
    std::size_t target = 0;
    for (const auto& v : by_class) target = std::max(target, v.size());

    std::vector<LabeledExample> out = train;
    Rng rng(seed);
    for (int c = 0; c < 3; ++c) {
        const auto& members = by_class[c];
        for (std::size_t k = members.size(); k < target; ++k)
            out.push_back(train[members[rng.bounded(members.size())]]);
    }
    return out;
}

std::vector<std::size_t> prebalance_indices(const std::vector<LabeledExample>& data,
                                            std::uint64_t seed) {
    auto by_class = indices_by_class(data);
    require_all_classes(by_class);
    std::size_t target = data.size();
    for (const auto& v : by_class) target = std::min(target, v.size());

    Rng rng(seed);
    std::vector<bool> keep(data.size(), false);
    for (int c = 0; c < 3; ++c) {
        auto members = by_class[c];
        rng.shuffle(members);
        for (std::size_t k = 0; k < target; ++k) keep[members[k]] = true;
    }
    std::vector<std::size_t> out;
    out.reserve(3 * target);
    for (std::size_t i = 0; i < data.size(); ++i)
        if (keep[i]) out.push_back(i);
    return out;
}

std::vector<LabeledExample> prebalance_undersample(const std::vector<LabeledExample>& data,
                                                   std::uint64_t seed) {
    std::vector<LabeledExample> out;
    auto kept = prebalance_indices(data, seed);
    out.reserve(kept.size());
    for (auto i : kept) out.push_back(data[i]);
    return out;
}

}  // namespace wscnn::sampler
