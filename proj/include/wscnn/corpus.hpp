#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace wscnn::corpus {

struct RawPost {
    int label = 0;  // 0 = negative, 1 = positive
    std::string text;
};

struct CleanPost {
    int label = 0;
    std::vector<std::string> tokens;  // never empty
};

// Dictionary for forward maximum matching. max_len is in code points.
struct SegDictionary {
    std::unordered_set<std::string> words;
    std::size_t max_len = 0;

    void insert(const std::string& word);
    bool empty() const { return words.empty(); }
};

struct CleanResult {
    std::vector<CleanPost> posts;
    std::size_t dropped = 0;
};

// CSV corpus: UTF-8, header `label,review`, RFC 4180 quoting.
// Throws std::runtime_error with a 1-based line number on malformed rows.
std::vector<RawPost> load_corpus(const std::string& path);

std::map<int, std::size_t> class_counts(const std::vector<RawPost>& posts);

// Removes every run of '@' plus following non-whitespace characters,
// together with one trailing whitespace character when present.
std::string strip_mentions(const std::string& text);

// Removes every code point whose Unicode general category is P*.
std::string strip_punctuation(const std::string& text);

// Forward maximum matching. Whitespace runs are hard boundaries; within a
// run the longest dictionary word at each position is emitted, falling back
// to the single character.
std::vector<std::string> segment(const std::string& text, const SegDictionary& dict);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stopset);

// strip_mentions -> strip_punctuation -> segment -> remove_stopwords per
// post; posts with no surviving tokens are dropped and counted.
CleanResult clean_corpus(const std::vector<RawPost>& posts, const SegDictionary& dict,
                         const std::unordered_set<std::string>& stopset);

// One entry per line, `word` or `word<space>frequency`; blank lines ignored.
SegDictionary load_dictionary(const std::string& path);

// One token per line, trimmed; blank lines ignored.
std::unordered_set<std::string> load_stopwords(const std::string& path);

}  // namespace wscnn::corpus
