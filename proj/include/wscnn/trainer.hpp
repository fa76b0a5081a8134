#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wscnn/model.hpp"
#include "wscnn/sampler.hpp"

namespace wscnn::trainer {

struct TrainConfig {
    int epochs = 5;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-7;
    int patience = 2;
    double val_fraction = 0.1;
    std::uint64_t seed = 0;
};

// First/second moment tensors mirroring the model parameters, plus the
// bias-correction step counter.
struct AdamState {
    std::vector<nn::Tensor> m;
    std::vector<nn::Tensor> v;
    std::int64_t t = 0;

    static AdamState for_model(model::Model& m);
};

struct History {
    std::vector<double> train_loss, train_acc, val_loss, val_acc;
    int stopped_epoch = 0;  // 1-based; last epoch actually run
    int best_epoch = 0;     // 1-based epoch of the best validation loss

    std::string to_csv() const;
};

// Validation-loss patience rule. Improvement is a strictly lower loss than
// the best seen; training stops once `patience` consecutive epochs fail to
// improve. Final weights are those at stopping time.
class EarlyStopper {
public:
    explicit EarlyStopper(int patience) : patience_(patience) {}

    // Returns true if training should stop after this epoch.
    bool observe(double val_loss);

    int best_epoch() const { return best_epoch_; }

private:
    int patience_;
    int epoch_ = 0;
    int best_epoch_ = 0;
    int stale_ = 0;
    double best_ = 0.0;
};

// Applies one Adam update in place. Throws on non-finite gradients.
void adam_step(model::Model& m, const model::ParamGrads<float>& grads, AdamState& state,
               const TrainConfig& config);

struct Dataset {
    std::vector<features::PaddedSequence> sequences;
    std::vector<labeler::TriLabel> labels;

    std::size_t size() const { return sequences.size(); }
};

Dataset encode_dataset(const std::vector<sampler::LabeledExample>& examples,
                       const features::Vocabulary& vocab, int maxlen);

std::pair<double, double> evaluate_loss_acc(const model::Model& m, const Dataset& data,
                                            int batch_size = 256);

// Carves the last val_fraction of a seeded shuffle as validation, then runs
// mini-batch Adam with per-epoch reshuffling and early stopping on the
// validation loss.
History train(model::Model& m, const Dataset& train_set, const TrainConfig& config);

}  // namespace wscnn::trainer
