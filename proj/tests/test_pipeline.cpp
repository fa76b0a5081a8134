#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pipeline_fixture.hpp"
#include "wscnn/metrics.hpp"

using namespace wscnn;
using namespace wscnn::testfix;
namespace fs = std::filesystem;

TEST_CASE("pipeline stages chain on a synthetic corpus") {
    auto corpus = write_synthetic_corpus("wscnn_pipe", 60, 1);
    auto cfg = small_run_config(corpus, corpus.dir + "/out", 7);

    auto s1 = pipeline::run_preprocess(cfg);
    CHECK(s1.find("preprocess:") == 0);
    CHECK(fs::exists(cfg.out_dir + "/cleaned.csv"));
    CHECK(fs::exists(cfg.out_dir + "/dist_raw.csv"));

    auto s2 = pipeline::run_label(cfg);
    CHECK(s2.find("label:") == 0);
    auto labeled = pipeline::read_labeled(cfg.out_dir + "/labeled.csv");
    CHECK(!labeled.empty());
    int seen[3] = {0, 0, 0};
    for (const auto& ex : labeled) ++seen[labeler::to_int(ex.label) + 1];
    CHECK(seen[0] > 0);
    CHECK(seen[1] > 0);
    CHECK(seen[2] > 0);

    pipeline::run_split(cfg);
    auto train_idx = pipeline::read_index_manifest(cfg.out_dir + "/split_train.csv");
    auto test_idx = pipeline::read_index_manifest(cfg.out_dir + "/split_test.csv");
    CHECK(train_idx.size() + test_idx.size() == labeled.size());
    CHECK(train_idx.size() == std::llround(0.8 * labeled.size()));

    pipeline::run_train(cfg);
    CHECK(fs::exists(cfg.resolved_model_path()));
    CHECK(fs::exists(cfg.out_dir + "/vocab.tsv"));
    CHECK(fs::exists(cfg.out_dir + "/history.csv"));

    auto s5 = pipeline::run_evaluate(cfg);
    CHECK(s5.find("evaluate:") == 0);
    CHECK(fs::exists(cfg.out_dir + "/eval_report.txt"));

    // Oversampled distribution is balanced.
    auto dist = slurp_file(cfg.out_dir + "/dist_oversampled.csv");
    CHECK(dist.find("category,count") == 0);

    // predict round-trip on raw lines.
    std::ofstream(corpus.dir + "/input.txt", std::ios::binary) << "好棒今天\n差烂电影\n";
    auto s6 = pipeline::run_predict(cfg, corpus.dir + "/input.txt", corpus.dir + "/preds.csv");
    CHECK(s6.find("predict: 2 lines") == 0);
    auto preds = slurp_file(corpus.dir + "/preds.csv");
    CHECK(preds.find("line,label") == 0);
}

TEST_CASE("export-plot stages and class order") {
    auto corpus = write_synthetic_corpus("wscnn_plot", 30, 2);
    auto cfg = small_run_config(corpus, corpus.dir + "/out", 3);
    pipeline::run_preprocess(cfg);
    pipeline::run_label(cfg);

    pipeline::run_export_plot(cfg, "labeled");
    auto csv = slurp_file(cfg.out_dir + "/dist_labeled.csv");
    auto neg = csv.find("\n-1,");
    auto neu = csv.find("\n0,");
    auto pos = csv.find("\n1,");
    CHECK(neg != std::string::npos);
    CHECK(neg < neu);
    CHECK(neu < pos);

    pipeline::run_export_plot(cfg, "raw");
    CHECK(slurp_file(cfg.out_dir + "/dist_raw.csv").find("category,count\n0,") == 0);

    CHECK_THROWS(pipeline::run_export_plot(cfg, "bogus"));
}

TEST_CASE("pipeline is byte-identical across runs with the same seed") {
    auto corpus = write_synthetic_corpus("wscnn_det", 40, 4);
    auto cfg_a = small_run_config(corpus, corpus.dir + "/out_a", 2024);
    auto cfg_b = small_run_config(corpus, corpus.dir + "/out_b", 2024);
    pipeline::run_pipeline(cfg_a);
    pipeline::run_pipeline(cfg_b);
    CHECK(slurp_file(cfg_a.resolved_model_path()) == slurp_file(cfg_b.resolved_model_path()));
    CHECK(slurp_file(cfg_a.out_dir + "/eval_report.txt") ==
          slurp_file(cfg_b.out_dir + "/eval_report.txt"));
    CHECK(slurp_file(cfg_a.out_dir + "/history.csv") == slurp_file(cfg_b.out_dir + "/history.csv"));

    // A different seed changes the model.
    auto cfg_c = small_run_config(corpus, corpus.dir + "/out_c", 2025);
    pipeline::run_pipeline(cfg_c);
    CHECK(slurp_file(cfg_a.resolved_model_path()) != slurp_file(cfg_c.resolved_model_path()));
}

TEST_CASE("pipeline equals individually run stages") {
    auto corpus = write_synthetic_corpus("wscnn_stages", 40, 5);
    auto cfg_a = small_run_config(corpus, corpus.dir + "/out_whole", 11);
    auto cfg_b = small_run_config(corpus, corpus.dir + "/out_steps", 11);
    pipeline::run_pipeline(cfg_a);
    pipeline::run_preprocess(cfg_b);
    pipeline::run_label(cfg_b);
    pipeline::run_split(cfg_b);
    pipeline::run_train(cfg_b);
    pipeline::run_evaluate(cfg_b);
    for (const char* f : {"/cleaned.csv", "/labeled.csv", "/split_train.csv", "/history.csv",
                          "/eval_report.txt"})
        CHECK(slurp_file(cfg_a.out_dir + f) == slurp_file(cfg_b.out_dir + f));
    CHECK(slurp_file(cfg_a.resolved_model_path()) == slurp_file(cfg_b.resolved_model_path()));
}

TEST_CASE("reconstruct-counts prebalances before splitting") {
    auto corpus = write_synthetic_corpus("wscnn_recon", 50, 6);
    auto cfg = small_run_config(corpus, corpus.dir + "/out", 13);
    cfg.reconstruct_counts = true;
    pipeline::run_preprocess(cfg);
    pipeline::run_label(cfg);
    auto summary = pipeline::run_split(cfg);
    CHECK(summary.find("prebalanced") != std::string::npos);

    auto labeled = pipeline::read_labeled(cfg.out_dir + "/labeled.csv");
    auto train_idx = pipeline::read_index_manifest(cfg.out_dir + "/split_train.csv");
    auto test_idx = pipeline::read_index_manifest(cfg.out_dir + "/split_test.csv");
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& ex : labeled) ++counts[labeler::to_int(ex.label) + 1];
    std::size_t min_count = std::min({counts[0], counts[1], counts[2]});
    CHECK(train_idx.size() + test_idx.size() == 3 * min_count);
}

TEST_CASE("missing inputs are reported by file name") {
    pipeline::RunConfig cfg;
    cfg.corpus_path = "/nonexistent/corpus.csv";
    cfg.dict_path = "/nonexistent/dict.txt";
    cfg.out_dir = (fs::temp_directory_path() / "wscnn_missing").string();
    CHECK_THROWS_WITH_AS(pipeline::run_preprocess(cfg), doctest::Contains("corpus.csv"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(pipeline::run_train(cfg), doctest::Contains("labeled.csv"),
                         std::runtime_error);
}

#ifdef WSCNN_CLI_PATH
TEST_CASE("CLI binary runs a full pipeline and fails cleanly") {
    auto corpus = write_synthetic_corpus("wscnn_cli", 30, 8);
    std::string out_dir = corpus.dir + "/out_cli";
    std::string cmd = std::string(WSCNN_CLI_PATH) + " pipeline --corpus " + corpus.corpus_path +
                      " --dict " + corpus.dict_path + " --stopwords " + corpus.stopword_path +
                      " --out " + out_dir +
                      " --seed 9 --max-words 64 --maxlen 16 --embed-dim 8 --filters 8"
                      " --hidden 8 --epochs 1 > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out_dir + "/model.wscnn"));
    CHECK(fs::exists(out_dir + "/manifest.txt"));

    // train without a labeled corpus: nonzero exit.
    std::string bad = std::string(WSCNN_CLI_PATH) + " train --out " + corpus.dir +
                      "/does_not_exist 2> /dev/null";
    CHECK(std::system(bad.c_str()) != 0);
}
#endif
