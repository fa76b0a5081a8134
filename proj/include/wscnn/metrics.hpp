#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "wscnn/labeler.hpp"

namespace wscnn::metrics {

// Rows = true class, columns = predicted class, class order (-1, 0, 1).
struct ConfusionMatrix {
    std::array<std::array<std::size_t, 3>, 3> counts{};

    std::size_t total() const;
};

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct EvalReport {
    std::array<ClassScores, 3> per_class;  // class order (-1, 0, 1)
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    double accuracy = 0.0;
    std::size_t total = 0;
    // Set when a 0/0 precision or recall was reported as 0.
    bool zero_division = false;

    // Key-value text with per-class blocks; values at full precision,
    // display-rounded copies alongside.
    std::string to_text() const;
    // Single CSV row (with header) for experiment sweeps.
    std::string to_csv_row() const;
};

ConfusionMatrix confusion(const std::vector<labeler::TriLabel>& y_true,
                          const std::vector<labeler::TriLabel>& y_pred);

// precision_j = cm[j][j] / colsum_j, recall_j = cm[j][j] / rowsum_j,
// f1 = 2PR / (P + R); 0/0 is reported as 0.
std::array<ClassScores, 3> per_class_prf(const ConfusionMatrix& cm);

EvalReport aggregate(const ConfusionMatrix& cm);

}  // namespace wscnn::metrics
