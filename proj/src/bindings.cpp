#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wscnn/corpus.hpp"
#include "wscnn/features.hpp"
#include "wscnn/labeler.hpp"
#include "wscnn/metrics.hpp"
#include "wscnn/model.hpp"
#include "wscnn/pipeline.hpp"
#include "wscnn/sampler.hpp"
#include "wscnn/trainer.hpp"

namespace py = pybind11;
using namespace wscnn;

namespace {

labeler::TriLabel tri(int v) { return labeler::trilabel_from_int(v); }

std::vector<labeler::TriLabel> tri_list(const std::vector<int>& v) {
    std::vector<labeler::TriLabel> out;
    out.reserve(v.size());
    for (int x : v) out.push_back(tri(x));
    return out;
}

sampler::LabeledExample make_example(const std::vector<std::string>& tokens, int label) {
    return {tokens, tri(label)};
}

}  // namespace

PYBIND11_MODULE(_wscnn, m) {
    m.doc() = "Weibo sentiment CNN pipeline (C++ core)";

    // ------------------------------------------------------------- corpus
    py::class_<corpus::SegDictionary>(m, "SegDictionary")
        .def(py::init([](const std::vector<std::string>& words) {
                 corpus::SegDictionary d;
                 for (const auto& w : words) d.insert(w);
                 return d;
             }),
             py::arg("words"))
        .def_static("load", &corpus::load_dictionary, py::arg("path"))
        .def_property_readonly("max_len", [](const corpus::SegDictionary& d) { return d.max_len; })
        .def("__len__", [](const corpus::SegDictionary& d) { return d.words.size(); });

    m.def("strip_mentions", &corpus::strip_mentions, py::arg("text"));
    m.def("strip_punctuation", &corpus::strip_punctuation, py::arg("text"));
    m.def("segment", &corpus::segment, py::arg("text"), py::arg("dictionary"));
    m.def(
        "remove_stopwords",
        [](const std::vector<std::string>& tokens, const std::vector<std::string>& stopwords) {
            return corpus::remove_stopwords(
                tokens, std::unordered_set<std::string>(stopwords.begin(), stopwords.end()));
        },
        py::arg("tokens"), py::arg("stopwords"));
    m.def("load_stopwords", [](const std::string& path) {
        auto s = corpus::load_stopwords(path);
        return std::vector<std::string>(s.begin(), s.end());
    });

    // ------------------------------------------------------------ labeler
    py::class_<labeler::NaiveBayesScorer>(m, "NaiveBayesScorer")
        .def_static(
            "train",
            [](const std::vector<std::pair<int, std::vector<std::string>>>& posts) {
                std::vector<corpus::CleanPost> cp;
                cp.reserve(posts.size());
                for (const auto& [label, tokens] : posts) cp.push_back({label, tokens});
                return labeler::train_scorer(cp);
            },
            py::arg("posts"), "Train from (binary_label, tokens) pairs.")
        .def("score",
             [](const labeler::NaiveBayesScorer& s, const std::vector<std::string>& tokens) {
                 return s.score(tokens).value;
             })
        .def("save", &labeler::NaiveBayesScorer::save, py::arg("path"))
        .def_static("load", &labeler::NaiveBayesScorer::load, py::arg("path"))
        .def_property_readonly("vocab_size",
                               [](const labeler::NaiveBayesScorer& s) { return s.vocab_size; });

    m.def(
        "classify", [](double score) { return labeler::to_int(labeler::classify({score})); },
        py::arg("score"));

    // ------------------------------------------------------------ sampler
    m.def(
        "split_dataset",
        [](const std::vector<std::pair<std::vector<std::string>, int>>& data, double ratio,
           std::uint64_t seed) {
            std::vector<sampler::LabeledExample> ex;
            ex.reserve(data.size());
            for (const auto& [tokens, label] : data) ex.push_back(make_example(tokens, label));
            auto pair = sampler::split(ex, ratio, seed);
            return std::make_pair(pair.train_indices, pair.test_indices);
        },
        py::arg("data"), py::arg("ratio") = 0.8, py::arg("seed") = 0,
        "Returns (train_indices, test_indices) of a seeded unstratified split.");
    m.def(
        "oversample",
        [](const std::vector<std::pair<std::vector<std::string>, int>>& data,
           std::uint64_t seed) {
            std::vector<sampler::LabeledExample> ex;
            ex.reserve(data.size());
            for (const auto& [tokens, label] : data) ex.push_back(make_example(tokens, label));
            auto out = sampler::oversample(ex, seed);
            std::vector<std::pair<std::vector<std::string>, int>> res;
            res.reserve(out.size());
            for (const auto& e : out) res.emplace_back(e.tokens, labeler::to_int(e.label));
            return res;
        },
        py::arg("data"), py::arg("seed") = 0);

    // ----------------------------------------------------------- features
    py::class_<features::Vocabulary>(m, "Vocabulary")
        .def_static("fit", &features::fit_vocab, py::arg("docs"), py::arg("capacity") = 5000)
        .def("encode",
             [](const features::Vocabulary& v, const std::vector<std::string>& tokens) {
                 return features::encode(v, tokens);
             })
        .def("lookup", &features::Vocabulary::lookup)
        .def("save", &features::Vocabulary::save, py::arg("path"))
        .def_static("load", &features::Vocabulary::load, py::arg("path"))
        .def("__len__", [](const features::Vocabulary& v) { return v.index_of.size(); });
    m.def(
        "pad", [](const std::vector<int>& seq, int maxlen) { return features::pad(seq, maxlen).ids; },
        py::arg("sequence"), py::arg("maxlen") = 400);

    // -------------------------------------------------------- model/train
    py::class_<model::ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("vocab", &model::ModelConfig::vocab)
        .def_readwrite("embed_dim", &model::ModelConfig::embed_dim)
        .def_readwrite("maxlen", &model::ModelConfig::maxlen)
        .def_readwrite("filters", &model::ModelConfig::filters)
        .def_readwrite("kernel", &model::ModelConfig::kernel)
        .def_readwrite("hidden", &model::ModelConfig::hidden)
        .def_readwrite("dropout_rate", &model::ModelConfig::dropout_rate);

    py::class_<model::Model>(m, "Model")
        .def_property_readonly("config", [](const model::Model& m_) { return m_.config; })
        .def("predict",
             [](const model::Model& m_, const std::vector<std::vector<int>>& sequences) {
                 std::vector<int> ids;
                 for (const auto& s : sequences) {
                     if (s.size() != static_cast<std::size_t>(m_.config.maxlen))
                         throw std::invalid_argument("sequence length must equal maxlen");
                     ids.insert(ids.end(), s.begin(), s.end());
                 }
                 auto preds = model::predict(m_, ids, static_cast<int>(sequences.size()));
                 std::vector<int> out;
                 out.reserve(preds.size());
                 for (auto p : preds) out.push_back(labeler::to_int(p));
                 return out;
             })
        .def("save", &model::save_model, py::arg("path"))
        .def_static("load", &model::load_model, py::arg("path"));

    m.def("build_model", &model::build_model, py::arg("config"), py::arg("seed"));
    m.def("param_counts", [](const model::ModelConfig& c) {
        auto p = model::param_count(c);
        py::dict d;
        d["embedding"] = p.embedding;
        d["conv"] = p.conv;
        d["dense"] = p.dense;
        d["output"] = p.output;
        d["total"] = p.total;
        return d;
    });

    py::class_<trainer::TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("epochs", &trainer::TrainConfig::epochs)
        .def_readwrite("batch_size", &trainer::TrainConfig::batch_size)
        .def_readwrite("learning_rate", &trainer::TrainConfig::learning_rate)
        .def_readwrite("patience", &trainer::TrainConfig::patience)
        .def_readwrite("val_fraction", &trainer::TrainConfig::val_fraction)
        .def_readwrite("seed", &trainer::TrainConfig::seed);

    py::class_<trainer::History>(m, "History")
        .def_readonly("train_loss", &trainer::History::train_loss)
        .def_readonly("train_acc", &trainer::History::train_acc)
        .def_readonly("val_loss", &trainer::History::val_loss)
        .def_readonly("val_acc", &trainer::History::val_acc)
        .def_readonly("stopped_epoch", &trainer::History::stopped_epoch)
        .def_readonly("best_epoch", &trainer::History::best_epoch);

    m.def(
        "train_model",
        [](model::Model& m_, const std::vector<std::vector<int>>& sequences,
           const std::vector<int>& labels, const trainer::TrainConfig& tc) {
            if (sequences.size() != labels.size())
                throw std::invalid_argument("sequences and labels differ in length");
            trainer::Dataset d;
            for (std::size_t i = 0; i < sequences.size(); ++i) {
                if (sequences[i].size() != static_cast<std::size_t>(m_.config.maxlen))
                    throw std::invalid_argument("sequence length must equal maxlen");
                d.sequences.push_back({sequences[i]});
                d.labels.push_back(tri(labels[i]));
            }
            return trainer::train(m_, d, tc);
        },
        py::arg("model"), py::arg("sequences"), py::arg("labels"), py::arg("config"));

    // ------------------------------------------------------------ metrics
    m.def(
        "evaluation_report",
        [](const std::vector<int>& y_true, const std::vector<int>& y_pred) {
            auto r = metrics::aggregate(metrics::confusion(tri_list(y_true), tri_list(y_pred)));
            py::dict d;
            py::list per_class;
            for (const auto& s : r.per_class) {
                py::dict c;
                c["precision"] = s.precision;
                c["recall"] = s.recall;
                c["f1"] = s.f1;
                c["support"] = s.support;
                per_class.append(c);
            }
            d["per_class"] = per_class;
            d["macro_f1"] = r.macro_f1;
            d["macro_precision"] = r.macro_precision;
            d["macro_recall"] = r.macro_recall;
            d["weighted_f1"] = r.weighted_f1;
            d["accuracy"] = r.accuracy;
            d["total"] = r.total;
            return d;
        },
        py::arg("y_true"), py::arg("y_pred"),
        "Per-class and aggregate precision/recall/F1 for 3-class labels in {-1, 0, 1}.");

    // ----------------------------------------------------------- pipeline
    py::class_<pipeline::RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("corpus_path", &pipeline::RunConfig::corpus_path)
        .def_readwrite("dict_path", &pipeline::RunConfig::dict_path)
        .def_readwrite("stopword_path", &pipeline::RunConfig::stopword_path)
        .def_readwrite("out_dir", &pipeline::RunConfig::out_dir)
        .def_readwrite("model_path", &pipeline::RunConfig::model_path)
        .def_readwrite("seed", &pipeline::RunConfig::seed)
        .def_readwrite("model", &pipeline::RunConfig::model)
        .def_readwrite("train", &pipeline::RunConfig::train)
        .def_readwrite("split_ratio", &pipeline::RunConfig::split_ratio)
        .def_readwrite("reconstruct_counts", &pipeline::RunConfig::reconstruct_counts);
    m.def("run_pipeline", &pipeline::run_pipeline);
    m.def("run_preprocess", &pipeline::run_preprocess);
    m.def("run_label", &pipeline::run_label);
    m.def("run_split", &pipeline::run_split);
    m.def("run_train", &pipeline::run_train);
    m.def("run_evaluate", &pipeline::run_evaluate);
}
