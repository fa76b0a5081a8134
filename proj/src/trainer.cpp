#include "wscnn/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wscnn/rng.hpp"

namespace wscnn::trainer {

AdamState AdamState::for_model(model::Model& model) {
    AdamState s;
    for (auto* p : model.params()) {
        s.m.emplace_back(p->shape);
        s.v.emplace_back(p->shape);
    }
    return s;
}

bool EarlyStopper::observe(double val_loss) {
    ++epoch_;
    if (best_epoch_ == 0 || val_loss < best_) {
        best_ = val_loss;
        best_epoch_ = epoch_;
        stale_ = 0;
        return false;
    }
    ++stale_;
    return stale_ >= patience_;
}

void adam_step(model::Model& m, const model::ParamGrads<float>& grads, AdamState& state,
               const TrainConfig& config) {
    auto params = m.params();
    auto grad_list = grads.list();
    ++state.t;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& theta = params[i]->data;
        const auto& g = grad_list[i]->data;
        auto& mom = state.m[i].data;
        auto& vel = state.v[i].data;
        for (std::size_t j = 0; j < theta.size(); ++j) {
            double gj = g[j];
            if (!std::isfinite(gj))
                throw std::runtime_error(std::string("non-finite gradient in ") +
                                         model::Model::param_name(i));
            double mj = config.beta1 * mom[j] + (1.0 - config.beta1) * gj;
            double vj = config.beta2 * vel[j] + (1.0 - config.beta2) * gj * gj;
            mom[j] = static_cast<float>(mj);
            vel[j] = static_cast<float>(vj);
            double m_hat = mj / bc1;
            double v_hat = vj / bc2;
            theta[j] = static_cast<float>(theta[j] - config.learning_rate * m_hat /
                                                          (std::sqrt(v_hat) + config.adam_epsilon));
        }
    }
}

Dataset encode_dataset(const std::vector<sampler::LabeledExample>& examples,
                       const features::Vocabulary& vocab, int maxlen) {
    Dataset d;
    d.sequences.reserve(examples.size());
    d.labels.reserve(examples.size());
    for (const auto& ex : examples) {
        d.sequences.push_back(features::pad(features::encode(vocab, ex.tokens), maxlen));
        d.labels.push_back(ex.label);
    }
    return d;
}

namespace {

struct Batch {
    std::vector<int> ids;
    nn::Tensor targets;
    int size = 0;
};

Batch gather(const Dataset& data, const std::vector<std::size_t>& order, std::size_t begin,
             std::size_t end) {
    Batch b;
    b.size = static_cast<int>(end - begin);
    const int maxlen = static_cast<int>(data.sequences[order[begin]].ids.size());
    b.ids.reserve(static_cast<std::size_t>(b.size) * maxlen);
    b.targets = nn::Tensor({b.size, 3});
    for (std::size_t i = begin; i < end; ++i) {
        const auto& seq = data.sequences[order[i]];
        b.ids.insert(b.ids.end(), seq.ids.begin(), seq.ids.end());
        auto oh = features::one_hot(data.labels[order[i]]);
        for (int j = 0; j < 3; ++j)
            b.targets.data[(i - begin) * 3 + j] = oh[j];
    }
    return b;
}

}  // namespace

std::pair<double, double> evaluate_loss_acc(const model::Model& m, const Dataset& data,
                                            int batch_size) {
    if (data.size() == 0) throw std::runtime_error("cannot evaluate on an empty dataset");
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < data.size(); begin += batch_size) {
        std::size_t end = std::min(begin + batch_size, data.size());
        Batch b = gather(data, order, begin, end);
        auto logits = model::forward_logits(m, b.ids, b.size, false, nullptr, (model::ForwardCache<float>*)nullptr);
        auto sl = nn::softmax_cross_entropy(logits, b.targets);
        loss_sum += sl.loss * b.size;
        auto preds = model::argmax_labels(sl.probs);
        for (std::size_t i = begin; i < end; ++i)
            if (preds[i - begin] == data.labels[order[i]]) ++correct;
    }
    return {loss_sum / static_cast<double>(data.size()),
            static_cast<double>(correct) / static_cast<double>(data.size())};
}

History train(model::Model& m, const Dataset& train_set, const TrainConfig& config) {
    if (config.epochs < 1) throw std::runtime_error("epochs must be >= 1");
    if (!(config.val_fraction > 0.0 && config.val_fraction < 1.0))
        throw std::runtime_error("val_fraction must be in (0, 1)");

    // Validation carve-out: last val_fraction of a seeded shuffle.
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(derive_seed(config.seed, "val_split"));
    split_rng.shuffle(order);
    auto n_val = static_cast<std::size_t>(
        std::llround(config.val_fraction * static_cast<double>(train_set.size())));
    if (train_set.size() - n_val == 0)
        throw std::runtime_error("training set is empty after validation carve-out");

    Dataset val, fit;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Dataset& dst = (i >= order.size() - n_val) ? val : fit;
        dst.sequences.push_back(train_set.sequences[order[i]]);
        dst.labels.push_back(train_set.labels[order[i]]);
    }

    Rng shuffle_rng(derive_seed(config.seed, "batch_shuffle"));
    Rng dropout_rng(derive_seed(config.seed, "dropout"));
    AdamState adam = AdamState::for_model(m);
    EarlyStopper stopper(config.patience);
    History history;

    std::vector<std::size_t> batch_order(fit.size());
    std::iota(batch_order.begin(), batch_order.end(), 0);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(batch_order);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t begin = 0; begin < fit.size();
             begin += static_cast<std::size_t>(config.batch_size)) {
            std::size_t end = std::min(begin + config.batch_size, fit.size());
            Batch b = gather(fit, batch_order, begin, end);
            model::ForwardCache<float> cache;
            auto logits = model::forward_logits(m, b.ids, b.size, true, &dropout_rng, &cache);
            auto sl = nn::softmax_cross_entropy(logits, b.targets);
            if (!std::isfinite(sl.loss))
                throw std::runtime_error("non-finite training loss at epoch " +
                                         std::to_string(epoch));
            loss_sum += sl.loss * b.size;
            auto preds = model::argmax_labels(sl.probs);
            for (std::size_t i = begin; i < end; ++i)
                if (preds[i - begin] == fit.labels[batch_order[i]]) ++correct;
            auto grads = model::backward(m, cache, sl.probs, b.targets);
            adam_step(m, grads, adam, config);
        }
        history.train_loss.push_back(loss_sum / static_cast<double>(fit.size()));
        history.train_acc.push_back(static_cast<double>(correct) /
                                    static_cast<double>(fit.size()));
        auto [vl, va] = n_val > 0 ? evaluate_loss_acc(m, val)
                                  : std::pair<double, double>{history.train_loss.back(),
                                                              history.train_acc.back()};
        history.val_loss.push_back(vl);
        history.val_acc.push_back(va);
        history.stopped_epoch = epoch;
        if (stopper.observe(vl)) break;
    }
    history.best_epoch = stopper.best_epoch();
    return history;
}

std::string History::to_csv() const {
    std::ostringstream out;
    out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
    char buf[128];
    for (std::size_t i = 0; i < train_loss.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", i + 1, train_loss[i],
                      train_acc[i], val_loss[i], val_acc[i]);
        out << buf;
    }
    return out.str();
}

}  // namespace wscnn::trainer
