#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "wscnn/pipeline.hpp"

using wscnn::pipeline::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"Weibo sentiment CNN pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string predict_in, predict_out = "predictions.csv", plot_stage = "labeled";

    app.set_config("--config")->description("key-value config file (flags take precedence)");
    app.add_option("--corpus", cfg.corpus_path, "corpus CSV (label,review)");
    app.add_option("--dict", cfg.dict_path, "segmentation dictionary file");
    app.add_option("--stopwords", cfg.stopword_path, "stopword file");
    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--model", cfg.model_path, "model file (default <out>/model.wscnn)");
    app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    app.add_option("--max-words", cfg.model.vocab, "vocabulary capacity")->capture_default_str();
    app.add_option("--maxlen", cfg.model.maxlen, "padded sequence length")->capture_default_str();
    app.add_option("--embed-dim", cfg.model.embed_dim, "embedding dimension")->capture_default_str();
    app.add_option("--filters", cfg.model.filters, "conv filters")->capture_default_str();
    app.add_option("--kernel", cfg.model.kernel, "conv kernel size")->capture_default_str();
    app.add_option("--hidden", cfg.model.hidden, "hidden units")->capture_default_str();
    app.add_option("--dropout", cfg.model.dropout_rate, "dropout rate")->capture_default_str();
    app.add_option("--epochs", cfg.train.epochs, "training epochs")->capture_default_str();
    app.add_option("--batch-size", cfg.train.batch_size, "mini-batch size")->capture_default_str();
    app.add_option("--patience", cfg.train.patience, "early-stopping patience")->capture_default_str();
    app.add_option("--val-split", cfg.train.val_fraction, "validation fraction")->capture_default_str();
    app.add_option("--split-ratio", cfg.split_ratio, "train fraction")->capture_default_str();
    app.add_flag("--reconstruct-counts", cfg.reconstruct_counts,
                 "prebalance classes before splitting");

    auto* preprocess = app.add_subcommand("preprocess", "clean and tokenize the corpus");
    auto* label = app.add_subcommand("label", "score and relabel into three classes");
    auto* split = app.add_subcommand("split", "80/20 split with audit manifests");
    auto* train = app.add_subcommand("train", "oversample, fit vocabulary and train the CNN");
    auto* evaluate = app.add_subcommand("evaluate", "per-class metrics on the test partition");
    auto* predict = app.add_subcommand("predict", "label raw texts, one per line");
    predict->add_option("--input", predict_in, "input text file")->required();
    predict->add_option("--output", predict_out, "prediction CSV")->capture_default_str();
    auto* export_plot = app.add_subcommand("export-plot", "category-count CSV for bar plots");
    export_plot->add_option("--stage", plot_stage, "raw | labeled | oversampled")
        ->capture_default_str();
    auto* pipeline_cmd = app.add_subcommand("pipeline", "run every stage end to end");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        std::string summary;
        if (*preprocess) summary = wscnn::pipeline::run_preprocess(cfg);
        else if (*label) summary = wscnn::pipeline::run_label(cfg);
        else if (*split) summary = wscnn::pipeline::run_split(cfg);
        else if (*train) summary = wscnn::pipeline::run_train(cfg);
        else if (*evaluate) summary = wscnn::pipeline::run_evaluate(cfg);
        else if (*predict) summary = wscnn::pipeline::run_predict(cfg, predict_in, predict_out);
        else if (*export_plot) summary = wscnn::pipeline::run_export_plot(cfg, plot_stage);
        else if (*pipeline_cmd) summary = wscnn::pipeline::run_pipeline(cfg);
        std::cout << summary << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
