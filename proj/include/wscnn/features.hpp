#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wscnn/labeler.hpp"

namespace wscnn::features {

// Frequency-ranked word -> index map. Index 0 is reserved for padding;
// indices 1..K cover the top K = min(distinct, capacity - 1) words, lower
// index meaning strictly higher frequency (ties broken by earlier first
// occurrence in the fitting corpus).
class Vocabulary {
public:
    std::unordered_map<std::string, int> index_of;
    int capacity = 5000;
    std::size_t fitted_docs = 0;

    std::optional<int> lookup(const std::string& word) const {
        auto it = index_of.find(word);
        if (it == index_of.end()) return std::nullopt;
        return it->second;
    }

    // Inverse lookup, for round-trip checks and inspection.
    std::optional<std::string> word_at(int index) const;

    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);
};

struct PaddedSequence {
    std::vector<int> ids;  // length == maxlen; zeros, if any, form a prefix
};

// Class order (-1, 0, 1) -> component (0, 1, 2).
using OneHotLabel = std::array<float, 3>;

Vocabulary fit_vocab(const std::vector<std::vector<std::string>>& docs, int capacity = 5000);

// Out-of-vocabulary tokens are dropped; order preserved.
std::vector<int> encode(const Vocabulary& vocab, const std::vector<std::string>& tokens);

// Pre-padding with zeros; over-long sequences keep their last maxlen ids.
PaddedSequence pad(const std::vector<int>& seq, int maxlen = 400);

OneHotLabel one_hot(labeler::TriLabel label);

}  // namespace wscnn::features
