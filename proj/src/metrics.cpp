#include "wscnn/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wscnn::metrics {

std::size_t ConfusionMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : counts)
        for (std::size_t v : row) n += v;
    return n;
}

ConfusionMatrix confusion(const std::vector<labeler::TriLabel>& y_true,
                          const std::vector<labeler::TriLabel>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion: label lists differ in length");
    if (y_true.empty()) throw std::invalid_argument("confusion: empty label lists");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        int r = labeler::to_int(y_true[i]) + 1;
        int c = labeler::to_int(y_pred[i]) + 1;
        ++cm.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return cm;
}

std::array<ClassScores, 3> per_class_prf(const ConfusionMatrix& cm) {
    std::array<ClassScores, 3> out;
    for (std::size_t j = 0; j < 3; ++j) {
        std::size_t rowsum = 0, colsum = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            rowsum += cm.counts[j][k];
            colsum += cm.counts[k][j];
        }
        std::size_t tp = cm.counts[j][j];
        ClassScores& s = out[j];
        s.support = rowsum;
        s.precision = colsum ? static_cast<double>(tp) / static_cast<double>(colsum) : 0.0;
        s.recall = rowsum ? static_cast<double>(tp) / static_cast<double>(rowsum) : 0.0;
        double pr = s.precision + s.recall;
        s.f1 = pr > 0.0 ? 2.0 * s.precision * s.recall / pr : 0.0;
    }
    return out;
}

EvalReport aggregate(const ConfusionMatrix& cm) {
    EvalReport r;
    r.per_class = per_class_prf(cm);
    r.total = cm.total();
    std::size_t trace = 0;
    for (std::size_t j = 0; j < 3; ++j) trace += cm.counts[j][j];
    r.accuracy = r.total ? static_cast<double>(trace) / static_cast<double>(r.total) : 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        const ClassScores& s = r.per_class[j];
        r.macro_precision += s.precision / 3.0;
        r.macro_recall += s.recall / 3.0;
        r.macro_f1 += s.f1 / 3.0;
        double w = r.total ? static_cast<double>(s.support) / static_cast<double>(r.total) : 0.0;
        r.weighted_precision += w * s.precision;
        r.weighted_recall += w * s.recall;
        r.weighted_f1 += w * s.f1;
        // Flag classes where a 0/0 was reported as 0.
        std::size_t colsum = 0;
        for (std::size_t k = 0; k < 3; ++k) colsum += cm.counts[k][j];
        if (colsum == 0 || s.support == 0) r.zero_division = true;
    }
    return r;
}

std::string EvalReport::to_text() const {
    static const char* names[3] = {"-1", "0", "1"};
    std::ostringstream out;
    char buf[160];
    for (std::size_t j = 0; j < 3; ++j) {
        const ClassScores& s = per_class[j];
        std::snprintf(buf, sizeof buf,
                      "class %s\n  precision %.12g (%.2f)\n  recall %.12g (%.2f)\n"
                      "  f1 %.12g (%.2f)\n  support %zu\n",
                      names[j], s.precision, s.precision, s.recall, s.recall, s.f1, s.f1,
                      s.support);
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "macro\n  precision %.12g (%.2f)\n  recall %.12g (%.2f)\n  f1 %.12g (%.2f)\n",
                  macro_precision, macro_precision, macro_recall, macro_recall, macro_f1,
                  macro_f1);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "weighted\n  precision %.12g (%.2f)\n  recall %.12g (%.2f)\n  f1 %.12g (%.2f)\n",
                  weighted_precision, weighted_precision, weighted_recall, weighted_recall,
                  weighted_f1, weighted_f1);
    out << buf;
    std::snprintf(buf, sizeof buf, "accuracy %.12g (%.2f)\ntotal %zu\nzero_division %d\n",
                  accuracy, accuracy, total, zero_division ? 1 : 0);
    out << buf;
    return out.str();
}

std::string EvalReport::to_csv_row() const {
    std::ostringstream out;
    out << "p_neg,r_neg,f1_neg,sup_neg,p_neu,r_neu,f1_neu,sup_neu,p_pos,r_pos,f1_pos,sup_pos,"
           "macro_p,macro_r,macro_f1,weighted_p,weighted_r,weighted_f1,accuracy,total\n";
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%.12g,%.12g,%.12g,%zu,%.12g,%.12g,%.12g,%zu,%.12g,%.12g,%.12g,%zu,"
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%zu\n",
                  per_class[0].precision, per_class[0].recall, per_class[0].f1,
                  per_class[0].support, per_class[1].precision, per_class[1].recall,
                  per_class[1].f1, per_class[1].support, per_class[2].precision,
                  per_class[2].recall, per_class[2].f1, per_class[2].support, macro_precision,
                  macro_recall, macro_f1, weighted_precision, weighted_recall, weighted_f1,
                  accuracy, total);
    out << buf;
    return out.str();
}

}  // namespace wscnn::metrics
