#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wscnn/labeler.hpp"

namespace wscnn::sampler {

struct LabeledExample {
    std::vector<std::string> tokens;  // non-empty
    labeler::TriLabel label = labeler::TriLabel::Neutral;

    bool operator==(const LabeledExample&) const = default;
};

struct SplitPair {
    std::vector<LabeledExample> train;
    std::vector<LabeledExample> test;
    // Row indices into the input, for audit manifests.
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// Seeded shuffle then partition at round(ratio * N). Unstratified.
SplitPair split(const std::vector<LabeledExample>& data, double ratio, std::uint64_t seed);

// Duplicates minority-class examples uniformly with replacement until every
// class count equals the pre-existing maximum. Originals are all retained.
std::vector<LabeledExample> oversample(const std::vector<LabeledExample>& train,
                                       std::uint64_t seed);

// Reduces every class to the minimum class count by seeded sampling without
// replacement. Reconstruction mode for reconciling reported instance counts.
std::vector<LabeledExample> prebalance_undersample(const std::vector<LabeledExample>& data,
                                                   std::uint64_t seed);

// Row indices (ascending) kept by prebalance_undersample for the same seed.
std::vector<std::size_t> prebalance_indices(const std::vector<LabeledExample>& data,
                                            std::uint64_t seed);

}  // namespace wscnn::sampler
