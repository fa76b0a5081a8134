#include <doctest.h>

#include <algorithm>
#include <map>

#include "wscnn/rng.hpp"
#include <set>

#include "wscnn/sampler.hpp"

using namespace wscnn;
using namespace wscnn::sampler;
using labeler::TriLabel;

namespace {

LabeledExample ex(int label, int id) {
    return {{"t" + std::to_string(id)}, labeler::trilabel_from_int(label)};
}

std::vector<LabeledExample> with_counts(int neg, int neu, int pos) {
    std::vector<LabeledExample> data;
    int id = 0;
    for (int i = 0; i < neg; ++i) data.push_back(ex(-1, id++));
    for (int i = 0; i < neu; ++i) data.push_back(ex(0, id++));
    for (int i = 0; i < pos; ++i) data.push_back(ex(1, id++));
    return data;
}

std::map<TriLabel, std::size_t> counts_of(const std::vector<LabeledExample>& data) {
    std::map<TriLabel, std::size_t> counts;
    for (const auto& e : data) ++counts[e.label];
    return counts;
}

std::multiset<std::string> token_multiset(const std::vector<LabeledExample>& data) {
    std::multiset<std::string> out;
    for (const auto& e : data) out.insert(e.tokens[0]);
    return out;
}

}  // namespace

TEST_CASE("split partitions at round(ratio*N)") {
    auto data = with_counts(4, 3, 3);
    auto pair = split(data, 0.8, 1);
    CHECK(pair.train.size() == 8);
    CHECK(pair.test.size() == 2);
}

TEST_CASE("split is deterministic per seed and a bijection") {
    auto data = with_counts(10, 7, 5);
    auto a = split(data, 0.8, 99);
    auto b = split(data, 0.8, 99);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);

    for (std::uint64_t seed : {0ull, 1ull, 12345ull}) {
        auto p = split(data, 0.8, seed);
        auto joined = token_multiset(p.train);
        for (const auto& t : token_multiset(p.test)) joined.insert(t);
        CHECK(joined == token_multiset(data));
    }
    CHECK(split(data, 0.8, 0).train_indices != split(data, 0.8, 1).train_indices);
}

TEST_CASE("split rejects bad input") {
    CHECK_THROWS(split({}, 0.8, 0));
    CHECK_THROWS(split(with_counts(1, 1, 1), 0.0, 0));
    CHECK_THROWS(split(with_counts(1, 1, 1), 1.0, 0));
}

TEST_CASE("oversample equalizes at the pre-existing maximum") {
    auto train = with_counts(5, 3, 2);
    auto out = oversample(train, 7);
    auto counts = counts_of(out);
    CHECK(counts[TriLabel::Negative] == 5);
    CHECK(counts[TriLabel::Neutral] == 5);
    CHECK(counts[TriLabel::Positive] == 5);
    CHECK(out.size() == 15);

    // Originals all retained, in order, as a prefix.
    for (std::size_t i = 0; i < train.size(); ++i) CHECK(out[i] == train[i]);
}

TEST_CASE("oversample leaves a balanced list unchanged") {
    auto train = with_counts(4, 4, 4);
    CHECK(oversample(train, 3) == train);
}

TEST_CASE("every appended example duplicates an existing same-class member") {
    auto train = with_counts(7, 4, 2);
    auto out = oversample(train, 21);
    for (std::size_t i = train.size(); i < out.size(); ++i) {
        bool found = false;
        for (const auto& orig : train)
            if (orig == out[i]) found = true;  // brute-force membership scan
        CHECK(found);
    }
}

TEST_CASE("oversample requires every class") {
    CHECK_THROWS(oversample(with_counts(3, 0, 2), 0));
}

TEST_CASE("prebalance_undersample reduces to the minimum class count") {
    auto data = with_counts(10, 6, 4);
    auto out = prebalance_undersample(data, 5);
    auto counts = counts_of(out);
    CHECK(counts[TriLabel::Negative] == 4);
    CHECK(counts[TriLabel::Neutral] == 4);
    CHECK(counts[TriLabel::Positive] == 4);

    // Sub-multiset of the input.
    auto in_tokens = token_multiset(data);
    for (const auto& t : token_multiset(out)) CHECK(in_tokens.count(t) == 1);

    auto balanced = with_counts(3, 3, 3);
    CHECK(counts_of(prebalance_undersample(balanced, 1)) == counts_of(balanced));
}

TEST_CASE("prebalance_indices are ascending and consistent") {
    auto data = with_counts(9, 5, 3);
    auto idx = prebalance_indices(data, 17);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    auto direct = prebalance_undersample(data, 17);
    REQUIRE(idx.size() == direct.size());
    for (std::size_t i = 0; i < idx.size(); ++i) CHECK(data[idx[i]] == direct[i]);
}
