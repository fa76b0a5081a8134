#include "wscnn/pipeline.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wscnn/corpus.hpp"
#include "wscnn/metrics.hpp"
#include "wscnn/rng.hpp"

namespace fs = std::filesystem;

namespace wscnn::pipeline {

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

// Single-line CSV record (tokens contain no whitespace, so no embedded
// newlines occur in our own artifacts).
std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

std::string crc32_hex(const std::string& bytes) {
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", crc);
    return buf;
}

struct CleanRow {
    int binary_label;
    std::vector<std::string> tokens;
};

std::vector<CleanRow> read_cleaned(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open cleaned corpus: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "label,tokens")
        throw std::runtime_error("not a cleaned-corpus file: " + path);
    std::vector<CleanRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = csv_fields(line);
        if (fields.size() != 2)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 2 columns");
        rows.push_back({std::stoi(fields[0]), split_tokens(fields[1])});
    }
    return rows;
}

void write_distribution(const std::string& path, const std::vector<std::pair<int, std::size_t>>& rows) {
    auto out = open_out(path);
    out << "category,count\n";
    for (const auto& [cat, count] : rows) out << cat << ',' << count << '\n';
}

std::array<std::size_t, 3> tri_counts(const std::vector<sampler::LabeledExample>& data) {
    std::array<std::size_t, 3> counts{0, 0, 0};
    for (const auto& ex : data)
        ++counts[static_cast<std::size_t>(labeler::to_int(ex.label) + 1)];
    return counts;
}

std::vector<sampler::LabeledExample> oversampled_train_set(const RunConfig& cfg) {
    auto labeled = read_labeled(cfg.out_dir + "/labeled.csv");
    auto train_idx = read_index_manifest(cfg.out_dir + "/split_train.csv");
    std::vector<sampler::LabeledExample> train;
    train.reserve(train_idx.size());
    for (auto i : train_idx) {
        if (i >= labeled.size())
            throw std::runtime_error("split manifest index out of range: " + std::to_string(i));
        train.push_back(labeled[i]);
    }
    return sampler::oversample(train, derive_seed(cfg.seed, "oversample"));
}

}  // namespace

std::string RunConfig::resolved_model_path() const {
    return model_path.empty() ? out_dir + "/model.wscnn" : model_path;
}

std::vector<sampler::LabeledExample> read_labeled(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open labeled corpus: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "label,score,tokens")
        throw std::runtime_error("not a labeled-corpus file: " + path);
    std::vector<sampler::LabeledExample> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = csv_fields(line);
        if (fields.size() != 3)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 3 columns");
        rows.push_back({split_tokens(fields[2]), labeler::trilabel_from_int(std::stoi(fields[0]))});
    }
    return rows;
}

std::vector<std::size_t> read_index_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open split manifest: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "index")
        throw std::runtime_error("not a split manifest: " + path);
    std::vector<std::size_t> out;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(std::stoul(line));
    return out;
}

std::string run_preprocess(const RunConfig& cfg) {
    ensure_dir(cfg.out_dir);
    auto posts = corpus::load_corpus(cfg.corpus_path);
    auto dict = corpus::load_dictionary(cfg.dict_path);
    auto stopset = cfg.stopword_path.empty()
                       ? std::unordered_set<std::string>{}
                       : corpus::load_stopwords(cfg.stopword_path);

    auto counts = corpus::class_counts(posts);
    write_distribution(cfg.out_dir + "/dist_raw.csv", {{0, counts[0]}, {1, counts[1]}});

    auto cleaned = corpus::clean_corpus(posts, dict, stopset);
    auto out = open_out(cfg.out_dir + "/cleaned.csv");
    out << "label,tokens\n";
    for (const auto& p : cleaned.posts)
        out << p.label << ',' << csv_quote(join_tokens(p.tokens)) << '\n';

    char buf[160];
    std::snprintf(buf, sizeof buf, "preprocess: %zu rows in, %zu kept, %zu dropped -> %s",
                  posts.size(), cleaned.posts.size(), cleaned.dropped,
                  (cfg.out_dir + "/cleaned.csv").c_str());
    return buf;
}

std::string run_label(const RunConfig& cfg) {
    ensure_dir(cfg.out_dir);
    auto rows = read_cleaned(cfg.out_dir + "/cleaned.csv");
    std::vector<corpus::CleanPost> posts;
    posts.reserve(rows.size());
    for (auto& r : rows) posts.push_back({r.binary_label, r.tokens});
    auto scorer = labeler::train_scorer(posts);
    scorer.save(cfg.out_dir + "/scorer.txt");

    std::array<std::size_t, 3> counts{0, 0, 0};
    auto out = open_out(cfg.out_dir + "/labeled.csv");
    out << "label,score,tokens\n";
    char num[48];
    for (const auto& p : posts) {
        auto s = scorer.score(p.tokens);
        auto label = labeler::classify(s);
        ++counts[static_cast<std::size_t>(labeler::to_int(label) + 1)];
        std::snprintf(num, sizeof num, "%.9g", s.value);
        out << labeler::to_int(label) << ',' << num << ','
            << csv_quote(join_tokens(p.tokens)) << '\n';
    }
    write_distribution(cfg.out_dir + "/dist_labeled.csv",
                       {{-1, counts[0]}, {0, counts[1]}, {1, counts[2]}});

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "label: %zu rows -> -1:%zu 0:%zu 1:%zu (vocab %zu) -> %s", posts.size(),
                  counts[0], counts[1], counts[2], scorer.vocab_size,
                  (cfg.out_dir + "/labeled.csv").c_str());
    return buf;
}

std::string run_split(const RunConfig& cfg) {
    ensure_dir(cfg.out_dir);
    auto labeled = read_labeled(cfg.out_dir + "/labeled.csv");

    std::vector<std::size_t> pool(labeled.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    if (cfg.reconstruct_counts)
        pool = sampler::prebalance_indices(labeled, derive_seed(cfg.seed, "prebalance"));

    std::vector<sampler::LabeledExample> data;
    data.reserve(pool.size());
    for (auto i : pool) data.push_back(labeled[i]);
    auto pair = sampler::split(data, cfg.split_ratio, derive_seed(cfg.seed, "split"));

    auto write_manifest = [&](const std::string& path, const std::vector<std::size_t>& idx) {
        auto out = open_out(path);
        out << "index\n";
        for (auto i : idx) out << pool[i] << '\n';
    };
    write_manifest(cfg.out_dir + "/split_train.csv", pair.train_indices);
    write_manifest(cfg.out_dir + "/split_test.csv", pair.test_indices);

    char buf[200];
    std::snprintf(buf, sizeof buf, "split: %zu rows -> %zu train, %zu test%s", data.size(),
                  pair.train.size(), pair.test.size(),
                  cfg.reconstruct_counts ? " (prebalanced)" : "");
    return buf;
}

std::string run_train(const RunConfig& cfg) {
    ensure_dir(cfg.out_dir);
    auto labeled = read_labeled(cfg.out_dir + "/labeled.csv");
    auto train_idx = read_index_manifest(cfg.out_dir + "/split_train.csv");
    std::vector<sampler::LabeledExample> train_part;
    train_part.reserve(train_idx.size());
    for (auto i : train_idx) {
        if (i >= labeled.size())
            throw std::runtime_error("split manifest index out of range: " + std::to_string(i));
        train_part.push_back(labeled[i]);
    }

    // Vocabulary comes from the training partition before oversampling, so
    // duplicated minority examples do not reweight word frequencies.
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train_part.size());
    for (const auto& ex : train_part) docs.push_back(ex.tokens);
    auto vocab = features::fit_vocab(docs, cfg.model.vocab);
    vocab.save(cfg.out_dir + "/vocab.tsv");

    auto balanced = sampler::oversample(train_part, derive_seed(cfg.seed, "oversample"));
    auto counts = tri_counts(balanced);
    write_distribution(cfg.out_dir + "/dist_oversampled.csv",
                       {{-1, counts[0]}, {0, counts[1]}, {1, counts[2]}});

    auto dataset = trainer::encode_dataset(balanced, vocab, cfg.model.maxlen);
    auto m = model::build_model(cfg.model, derive_seed(cfg.seed, "init"));
    trainer::TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.seed, "train");
    auto history = trainer::train(m, dataset, tc);

    model::save_model(m, cfg.resolved_model_path());
    open_out(cfg.out_dir + "/history.csv") << history.to_csv();

    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "train: %zu examples (balanced %zu/class), stopped epoch %d, best epoch %d, "
                  "val_loss %.4f -> %s",
                  balanced.size(), counts[0], history.stopped_epoch, history.best_epoch,
                  history.val_loss.back(), cfg.resolved_model_path().c_str());
    return buf;
}

std::string run_evaluate(const RunConfig& cfg) {
    auto m = model::load_model(cfg.resolved_model_path());
    auto vocab = features::Vocabulary::load(cfg.out_dir + "/vocab.tsv");
    auto labeled = read_labeled(cfg.out_dir + "/labeled.csv");
    auto test_idx = read_index_manifest(cfg.out_dir + "/split_test.csv");
    std::vector<sampler::LabeledExample> test;
    test.reserve(test_idx.size());
    for (auto i : test_idx) {
        if (i >= labeled.size())
            throw std::runtime_error("split manifest index out of range: " + std::to_string(i));
        test.push_back(labeled[i]);
    }
    auto dataset = trainer::encode_dataset(test, vocab, m.config.maxlen);

    std::vector<labeler::TriLabel> preds;
    preds.reserve(dataset.size());
    const std::size_t chunk = 256;
    for (std::size_t begin = 0; begin < dataset.size(); begin += chunk) {
        std::size_t end = std::min(begin + chunk, dataset.size());
        std::vector<int> ids;
        ids.reserve((end - begin) * static_cast<std::size_t>(m.config.maxlen));
        for (std::size_t i = begin; i < end; ++i)
            ids.insert(ids.end(), dataset.sequences[i].ids.begin(), dataset.sequences[i].ids.end());
        auto batch_preds = model::predict(m, ids, static_cast<int>(end - begin));
        preds.insert(preds.end(), batch_preds.begin(), batch_preds.end());
    }

    auto report = metrics::aggregate(metrics::confusion(dataset.labels, preds));
    open_out(cfg.out_dir + "/eval_report.txt") << report.to_text();
    open_out(cfg.out_dir + "/eval_report.csv") << report.to_csv_row();

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "evaluate: %zu examples, accuracy %.4f, macro F1 %.4f -> %s", report.total,
                  report.accuracy, report.macro_f1, (cfg.out_dir + "/eval_report.txt").c_str());
    return buf;
}

std::string run_predict(const RunConfig& cfg, const std::string& input_path,
                        const std::string& output_path) {
    auto m = model::load_model(cfg.resolved_model_path());
    auto vocab = features::Vocabulary::load(cfg.out_dir + "/vocab.tsv");
    auto dict = corpus::load_dictionary(cfg.dict_path);
    auto stopset = cfg.stopword_path.empty()
                       ? std::unordered_set<std::string>{}
                       : corpus::load_stopwords(cfg.stopword_path);

    std::ifstream in(input_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + input_path);
    auto out = open_out(output_path);
    out << "line,label\n";
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = corpus::remove_stopwords(
            corpus::segment(corpus::strip_punctuation(corpus::strip_mentions(line)), dict),
            stopset);
        auto padded = features::pad(features::encode(vocab, tokens), m.config.maxlen);
        auto pred = model::predict(m, padded.ids, 1);
        out << lineno << ',' << labeler::to_int(pred[0]) << '\n';
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "predict: %zu lines -> %s", lineno, output_path.c_str());
    return buf;
}

std::string run_export_plot(const RunConfig& cfg, const std::string& stage) {
    ensure_dir(cfg.out_dir);
    std::string path;
    if (stage == "raw") {
        auto counts = corpus::class_counts(corpus::load_corpus(cfg.corpus_path));
        path = cfg.out_dir + "/dist_raw.csv";
        write_distribution(path, {{0, counts[0]}, {1, counts[1]}});
    } else if (stage == "labeled") {
        auto counts = tri_counts(read_labeled(cfg.out_dir + "/labeled.csv"));
        path = cfg.out_dir + "/dist_labeled.csv";
        write_distribution(path, {{-1, counts[0]}, {0, counts[1]}, {1, counts[2]}});
    } else if (stage == "oversampled") {
        auto counts = tri_counts(oversampled_train_set(cfg));
        path = cfg.out_dir + "/dist_oversampled.csv";
        write_distribution(path, {{-1, counts[0]}, {0, counts[1]}, {1, counts[2]}});
    } else {
        throw std::runtime_error("unknown plot stage `" + stage +
                                 "` (expected raw, labeled or oversampled)");
    }
    return "export-plot: stage " + stage + " -> " + path;
}

std::string run_pipeline(const RunConfig& cfg) {
    std::ostringstream summary;
    summary << run_preprocess(cfg) << '\n'
            << run_label(cfg) << '\n'
            << run_split(cfg) << '\n'
            << run_train(cfg) << '\n'
            << run_evaluate(cfg) << '\n';

    auto manifest = open_out(cfg.out_dir + "/manifest.txt");
    manifest << "seed=" << cfg.seed << "\n";
    for (const char* stage : {"prebalance", "split", "oversample", "init", "train"})
        manifest << "seed." << stage << "=" << derive_seed(cfg.seed, stage) << "\n";
    const model::ModelConfig& mc = cfg.model;
    manifest << "model.vocab=" << mc.vocab << "\nmodel.embed_dim=" << mc.embed_dim
             << "\nmodel.maxlen=" << mc.maxlen << "\nmodel.filters=" << mc.filters
             << "\nmodel.kernel=" << mc.kernel << "\nmodel.hidden=" << mc.hidden
             << "\nmodel.dropout=" << mc.dropout_rate << "\n";
    const trainer::TrainConfig& tc = cfg.train;
    manifest << "train.epochs=" << tc.epochs << "\ntrain.batch_size=" << tc.batch_size
             << "\ntrain.learning_rate=" << tc.learning_rate
             << "\ntrain.patience=" << tc.patience
             << "\ntrain.val_fraction=" << tc.val_fraction << "\n";
    manifest << "split_ratio=" << cfg.split_ratio
             << "\nreconstruct_counts=" << (cfg.reconstruct_counts ? 1 : 0) << "\n";
    for (const std::string& p : {cfg.corpus_path, cfg.dict_path, cfg.stopword_path})
        if (!p.empty()) manifest << "input " << p << " crc32=" << crc32_hex(slurp(p)) << "\n";
    for (const char* name :
         {"cleaned.csv", "labeled.csv", "split_train.csv", "split_test.csv", "vocab.tsv",
          "history.csv", "eval_report.txt", "dist_raw.csv", "dist_labeled.csv",
          "dist_oversampled.csv"}) {
        std::string p = cfg.out_dir + "/" + name;
        if (fs::exists(p)) manifest << "artifact " << name << " crc32=" << crc32_hex(slurp(p)) << "\n";
    }
    manifest << "artifact model crc32=" << crc32_hex(slurp(cfg.resolved_model_path())) << "\n";

    summary << "pipeline: manifest -> " << cfg.out_dir << "/manifest.txt";
    return summary.str();
}

}  // namespace wscnn::pipeline
