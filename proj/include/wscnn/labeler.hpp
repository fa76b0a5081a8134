#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "wscnn/corpus.hpp"

namespace wscnn::labeler {

// Posterior probability of the positive class, in [0, 1].
struct SentimentScore {
    double value = 0.5;
};

enum class TriLabel : int { Negative = -1, Neutral = 0, Positive = 1 };

inline int to_int(TriLabel l) { return static_cast<int>(l); }
TriLabel trilabel_from_int(int v);

// Multinomial Naive Bayes over the binary corpus labels, Laplace alpha = 1,
// with one shared unseen-token slot per class. All arithmetic is log-space.
class NaiveBayesScorer {
public:
    // Index 0 = negative class, 1 = positive class.
    std::array<double, 2> class_log_prior{};
    std::unordered_map<std::string, std::array<double, 2>> token_log_likelihood;
    std::array<double, 2> unseen_log_likelihood{};
    std::size_t vocab_size = 0;

    SentimentScore score(const std::vector<std::string>& tokens) const;

    void save(const std::string& path) const;
    static NaiveBayesScorer load(const std::string& path);
};

// Requires at least one post per binary class.
NaiveBayesScorer train_scorer(const std::vector<corpus::CleanPost>& posts);

// value < 0.3 -> Negative; 0.3 <= value <= 0.7 -> Neutral; value > 0.7 -> Positive.
TriLabel classify(SentimentScore s);

}  // namespace wscnn::labeler
