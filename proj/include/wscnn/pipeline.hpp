#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wscnn/model.hpp"
#include "wscnn/sampler.hpp"
#include "wscnn/trainer.hpp"

namespace wscnn::pipeline {

// Everything a run needs; defaults follow the reference setup
// (V=5000, maxlen=400, 250 filters of size 3, hidden 250, dropout 0.2,
// 5 epochs, patience 2, 80/20 split).
struct RunConfig {
    std::string corpus_path;
    std::string dict_path;
    std::string stopword_path;
    std::string out_dir = "out";
    std::string model_path;  // defaults to <out_dir>/model.wscnn

    std::uint64_t seed = 42;
    model::ModelConfig model;
    trainer::TrainConfig train;
    double split_ratio = 0.8;
    bool reconstruct_counts = false;

    std::string resolved_model_path() const;
};

// Stage artifacts inside out_dir:
//   cleaned.csv            label,tokens            (preprocess)
//   dist_raw.csv           category,count          (preprocess)
//   scorer.txt             Naive Bayes scorer      (label)
//   labeled.csv            label,score,tokens      (label)
//   dist_labeled.csv       category,count          (label)
//   split_train.csv / split_test.csv  row indices  (split)
//   vocab.tsv, model file, history.csv, dist_oversampled.csv   (train)
//   eval_report.txt, eval_report.csv                           (evaluate)
//   manifest.txt           config, seeds, file digests         (pipeline)

std::string run_preprocess(const RunConfig& cfg);
std::string run_label(const RunConfig& cfg);
std::string run_split(const RunConfig& cfg);
std::string run_train(const RunConfig& cfg);
std::string run_evaluate(const RunConfig& cfg);
std::string run_predict(const RunConfig& cfg, const std::string& input_path,
                        const std::string& output_path);
std::string run_export_plot(const RunConfig& cfg, const std::string& stage);
std::string run_pipeline(const RunConfig& cfg);

// Labeled-corpus round-trips used by stages and tests.
std::vector<sampler::LabeledExample> read_labeled(const std::string& path);
std::vector<std::size_t> read_index_manifest(const std::string& path);

}  // namespace wscnn::pipeline
