#include "wscnn/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wscnn::labeler {

TriLabel trilabel_from_int(int v) {
    switch (v) {
        case -1: return TriLabel::Negative;
        case 0: return TriLabel::Neutral;
        case 1: return TriLabel::Positive;
    }
    throw std::invalid_argument("trilabel must be -1, 0 or 1, got " + std::to_string(v));
}

NaiveBayesScorer train_scorer(const std::vector<corpus::CleanPost>& posts) {
    std::array<std::size_t, 2> doc_count{0, 0};
    std::array<std::size_t, 2> token_total{0, 0};
    std::unordered_map<std::string, std::array<std::size_t, 2>> counts;
    for (const auto& p : posts) {
        ++doc_count[p.label];
        for (const auto& t : p.tokens) {
            ++counts[t][p.label];
            ++token_total[p.label];
        }
    }
    if (doc_count[0] == 0 || doc_count[1] == 0)
        throw std::runtime_error("scorer training needs at least one post per binary class");

    NaiveBayesScorer scorer;
    scorer.vocab_size = counts.size();
    double total_docs = static_cast<double>(doc_count[0] + doc_count[1]);
    for (int c = 0; c < 2; ++c) {
        scorer.class_log_prior[c] = std::log(doc_count[c] / total_docs);
        // Denominator includes one pseudo-count per vocabulary word plus the
        // shared unseen slot.
        double denom = static_cast<double>(token_total[c] + scorer.vocab_size + 1);
        scorer.unseen_log_likelihood[c] = std::log(1.0 / denom);
    }
    scorer.token_log_likelihood.reserve(counts.size());
    for (const auto& [tok, c2] : counts) {
        std::array<double, 2> ll;
        for (int c = 0; c < 2; ++c) {
            double denom = static_cast<double>(token_total[c] + scorer.vocab_size + 1);
            ll[c] = std::log((c2[c] + 1.0) / denom);
        }
        scorer.token_log_likelihood.emplace(tok, ll);
    }
    return scorer;
}

SentimentScore NaiveBayesScorer::score(const std::vector<std::string>& tokens) const {
    std::array<double, 2> lp = class_log_prior;
    for (const auto& t : tokens) {
        auto it = token_log_likelihood.find(t);
        for (int c = 0; c < 2; ++c)
            lp[c] += (it != token_log_likelihood.end()) ? it->second[c]
                                                        : unseen_log_likelihood[c];
    }
    double m = std::max(lp[0], lp[1]);
    double z = std::exp(lp[0] - m) + std::exp(lp[1] - m);
    return {std::exp(lp[1] - m) / z};
}

TriLabel classify(SentimentScore s) {
    if (s.value < 0.3) return TriLabel::Negative;
    if (s.value > 0.7) return TriLabel::Positive;
    return TriLabel::Neutral;
}

void NaiveBayesScorer::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scorer file: " + path);
    char buf[64];
    out << "WSNB 1\n";
    std::snprintf(buf, sizeof buf, "%.17g %.17g", class_log_prior[0], class_log_prior[1]);
    out << "priors " << buf << "\n";
    out << "vocab_size " << vocab_size << "\n";
    std::snprintf(buf, sizeof buf, "%.17g %.17g", unseen_log_likelihood[0],
                  unseen_log_likelihood[1]);
    out << "unseen " << buf << "\n";
    // Sorted for byte-stable output.
    std::vector<const std::string*> toks;
    toks.reserve(token_log_likelihood.size());
    for (const auto& kv : token_log_likelihood) toks.push_back(&kv.first);
    std::sort(toks.begin(), toks.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    for (int c = 0; c < 2; ++c) {
        for (const auto* t : toks) {
            std::snprintf(buf, sizeof buf, "%.17g", token_log_likelihood.at(*t)[c]);
            out << c << '\t' << buf << '\t' << *t << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

NaiveBayesScorer NaiveBayesScorer::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scorer file: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "WSNB" || version != 1)
        throw std::runtime_error("not a scorer file (or unsupported version): " + path);
    NaiveBayesScorer scorer;
    std::string key;
    in >> key >> scorer.class_log_prior[0] >> scorer.class_log_prior[1];
    if (key != "priors") throw std::runtime_error("malformed scorer file: " + path);
    in >> key >> scorer.vocab_size;
    if (key != "vocab_size") throw std::runtime_error("malformed scorer file: " + path);
    in >> key >> scorer.unseen_log_likelihood[0] >> scorer.unseen_log_likelihood[1];
    if (key != "unseen") throw std::runtime_error("malformed scorer file: " + path);
    in.ignore();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = (t1 == std::string::npos) ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw std::runtime_error("malformed scorer line: " + line);
        int c = std::stoi(line.substr(0, t1));
        double ll = std::stod(line.substr(t1 + 1, t2 - t1 - 1));
        std::string tok = line.substr(t2 + 1);
        if (c != 0 && c != 1) throw std::runtime_error("malformed scorer line: " + line);
        scorer.token_log_likelihood[tok][c] = ll;
    }
    return scorer;
}

}  // namespace wscnn::labeler
