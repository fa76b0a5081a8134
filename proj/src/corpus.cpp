#include "wscnn/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wscnn/text.hpp"

namespace wscnn::corpus {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// One RFC 4180 record. Advances pos past the record and its terminator;
// `line` tracks the 1-based physical line where the record starts.
std::vector<std::string> read_record(const std::string& buf, std::size_t& pos,
                                     std::size_t& line, const std::string& path) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    const std::size_t start_line = line;
    while (pos < buf.size()) {
        char c = buf[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < buf.size() && buf[pos + 1] == '"') {
                    field.push_back('"');
                    pos += 2;
                } else {
                    quoted = false;
                    ++pos;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
                ++pos;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++pos;
        } else if (c == '\n' || c == '\r') {
            break;
        } else {
            field.push_back(c);
            ++pos;
        }
    }
    if (quoted) fail(path, start_line, "unterminated quoted field");
    fields.push_back(std::move(field));
    if (pos < buf.size() && buf[pos] == '\r') ++pos;
    if (pos < buf.size() && buf[pos] == '\n') {
        ++pos;
        ++line;
    }
    return fields;
}

}  // namespace

void SegDictionary::insert(const std::string& word) {
    if (word.empty()) return;
    words.insert(word);
    max_len = std::max(max_len, utf8_length(word));
}

std::vector<RawPost> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string buf = std::move(ss).str();
    // Strip a UTF-8 BOM if present.
    if (buf.rfind("\xEF\xBB\xBF", 0) == 0) buf.erase(0, 3);

    std::size_t pos = 0, line = 1;
    auto header = read_record(buf, pos, line, path);
    if (header.size() != 2 || trim(header[0]) != "label" || trim(header[1]) != "review")
        fail(path, 1, "expected header `label,review`");

    std::vector<RawPost> posts;
    while (pos < buf.size()) {
        std::size_t record_line = line;
        auto fields = read_record(buf, pos, line, path);
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
        if (fields.size() != 2)
            fail(path, record_line,
                 "expected 2 columns, got " + std::to_string(fields.size()));
        const std::string& lab = fields[0];
        if (lab != "0" && lab != "1") fail(path, record_line, "label must be 0 or 1, got `" + lab + "`");
        if (!utf8_valid(fields[1])) fail(path, record_line, "invalid UTF-8 in review");
        posts.push_back({lab == "1" ? 1 : 0, std::move(fields[1])});
    }
    return posts;
}

std::map<int, std::size_t> class_counts(const std::vector<RawPost>& posts) {
    std::map<int, std::size_t> counts{{0, 0}, {1, 0}};
    for (const auto& p : posts) ++counts[p.label];
    return counts;
}

std::string strip_mentions(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '@') {
            ++i;
            while (i < text.size()) {
                std::size_t j = i;
                std::int32_t cp = utf8_decode(text, j);
                if (cp >= 0 && is_whitespace(static_cast<char32_t>(cp))) break;
                i = j;
            }
            if (i < text.size()) {
                // Consume the single whitespace character that ends the mention.
                utf8_decode(text, i);
            }
        } else {
            std::size_t start = i;
            utf8_decode(text, i);
            out.append(text, start, i - start);
        }
    }
    return out;
}

std::string strip_punctuation(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        std::int32_t cp = utf8_decode(text, i);
        if (cp >= 0 && is_punctuation(static_cast<char32_t>(cp))) continue;
        out.append(text, start, i - start);
    }
    return out;
}

std::vector<std::string> segment(const std::string& text, const SegDictionary& dict) {
    std::vector<std::string> chars = utf8_chars(text);
    std::vector<std::string> tokens;
    std::size_t n = chars.size();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = 0;
        std::int32_t cp = utf8_decode(chars[i], j);
        if (cp >= 0 && is_whitespace(static_cast<char32_t>(cp))) {
            ++i;
            continue;
        }
        // Longest dictionary word starting here, bounded by the next
        // whitespace boundary.
        std::size_t limit = std::min(dict.max_len, n - i);
        std::size_t best = 0;
        std::string best_word;
        std::string run;
        for (std::size_t k = 0; k < limit; ++k) {
            std::size_t jj = 0;
            std::int32_t c2 = utf8_decode(chars[i + k], jj);
            if (c2 >= 0 && is_whitespace(static_cast<char32_t>(c2))) break;
            run += chars[i + k];
            if (dict.words.count(run)) {
                best = k + 1;
                best_word = run;
            }
        }
        if (best == 0) {
            tokens.push_back(chars[i]);
            ++i;
        } else {
            tokens.push_back(std::move(best_word));
            i += best;
        }
    }
    return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stopset) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (!stopset.count(t)) out.push_back(t);
    return out;
}

CleanResult clean_corpus(const std::vector<RawPost>& posts, const SegDictionary& dict,
                         const std::unordered_set<std::string>& stopset) {
    CleanResult result;
    result.posts.reserve(posts.size());
    for (const auto& p : posts) {
        std::string t = strip_punctuation(strip_mentions(p.text));
        std::vector<std::string> tokens = remove_stopwords(segment(t, dict), stopset);
        if (tokens.empty()) {
            ++result.dropped;
            continue;
        }
        result.posts.push_back({p.label, std::move(tokens)});
    }
    return result;
}

SegDictionary load_dictionary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dictionary file: " + path);
    SegDictionary dict;
    std::string line;
    while (std::getline(in, line)) {
        std::string entry = trim(line);
        if (entry.empty()) continue;
        // `word` or `word<space>frequency`; the frequency is unused by FMM.
        std::size_t sp = entry.find(' ');
        if (sp != std::string::npos) entry.resize(sp);
        dict.insert(entry);
    }
    if (dict.empty()) throw std::runtime_error("dictionary is empty: " + path);
    return dict;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open stopword file: " + path);
    std::unordered_set<std::string> stopset;
    std::string line;
    while (std::getline(in, line)) {
        std::string tok = trim(line);
        if (!tok.empty()) stopset.insert(tok);
    }
    return stopset;
}

}  // namespace wscnn::corpus
