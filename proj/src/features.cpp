#include "wscnn/features.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wscnn::features {

std::optional<std::string> Vocabulary::word_at(int index) const {
    for (const auto& [w, i] : index_of)
        if (i == index) return w;
    return std::nullopt;
}

Vocabulary fit_vocab(const std::vector<std::vector<std::string>>& docs, int capacity) {
    if (capacity < 2) throw std::runtime_error("vocabulary capacity must be >= 2");
    if (docs.empty()) throw std::runtime_error("cannot fit vocabulary on an empty corpus");

    struct Entry {
        std::size_t count = 0;
        std::size_t first_seen = 0;
    };
    std::unordered_map<std::string, Entry> freq;
    std::size_t position = 0;
    for (const auto& doc : docs) {
        for (const auto& tok : doc) {
            auto [it, inserted] = freq.try_emplace(tok);
            if (inserted) it->second.first_seen = position;
            ++it->second.count;
            ++position;
        }
    }

    std::vector<const std::pair<const std::string, Entry>*> ranked;
    ranked.reserve(freq.size());
    for (const auto& kv : freq) ranked.push_back(&kv);
    std::sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) {
        if (a->second.count != b->second.count) return a->second.count > b->second.count;
        return a->second.first_seen < b->second.first_seen;
    });

    Vocabulary vocab;
    vocab.capacity = capacity;
    vocab.fitted_docs = docs.size();
    std::size_t kept = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(capacity) - 1);
    vocab.index_of.reserve(kept);
    for (std::size_t i = 0; i < kept; ++i)
        vocab.index_of.emplace(ranked[i]->first, static_cast<int>(i) + 1);
    return vocab;
}

std::vector<int> encode(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        auto it = vocab.index_of.find(t);
        if (it != vocab.index_of.end()) out.push_back(it->second);
    }
    return out;
}

PaddedSequence pad(const std::vector<int>& seq, int maxlen) {
    if (maxlen < 1) throw std::runtime_error("maxlen must be >= 1");
    PaddedSequence out;
    out.ids.assign(static_cast<std::size_t>(maxlen), 0);
    std::size_t n = seq.size();
    std::size_t m = static_cast<std::size_t>(maxlen);
    if (n >= m) {
        std::copy(seq.end() - static_cast<std::ptrdiff_t>(m), seq.end(), out.ids.begin());
    } else {
        std::copy(seq.begin(), seq.end(), out.ids.begin() + static_cast<std::ptrdiff_t>(m - n));
    }
    return out;
}

OneHotLabel one_hot(labeler::TriLabel label) {
    OneHotLabel v{0.0f, 0.0f, 0.0f};
    v[static_cast<std::size_t>(labeler::to_int(label) + 1)] = 1.0f;
    return v;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
    out << "#vocab\tcapacity=" << capacity << "\tdocs=" << fitted_docs << "\n";
    std::vector<std::pair<int, const std::string*>> rows;
    rows.reserve(index_of.size());
    for (const auto& [w, i] : index_of) rows.emplace_back(i, &w);
    std::sort(rows.begin(), rows.end());
    for (const auto& [i, w] : rows) out << *w << '\t' << i << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("#vocab\t", 0) != 0)
        throw std::runtime_error("not a vocabulary file: " + path);
    Vocabulary vocab;
    std::size_t cap_pos = line.find("capacity=");
    std::size_t docs_pos = line.find("docs=");
    if (cap_pos == std::string::npos || docs_pos == std::string::npos)
        throw std::runtime_error("malformed vocabulary header: " + path);
    vocab.capacity = std::stoi(line.substr(cap_pos + 9));
    vocab.fitted_docs = std::stoul(line.substr(docs_pos + 5));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t tab = line.rfind('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("malformed vocabulary line: " + line);
        vocab.index_of[line.substr(0, tab)] = std::stoi(line.substr(tab + 1));
    }
    return vocab;
}

}  // namespace wscnn::features
