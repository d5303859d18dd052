#pragma once

#include <cstdint>
#include <vector>

#include "afcfit/dataset.hpp"
#include "afcfit/density.hpp"

namespace afcfit {

enum class HiddenActivation { relu, tanh };

struct MlpConfig {
    int epochs = 5;
    int batch_size = 128;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    HiddenActivation activation = HiddenActivation::relu;
    std::uint64_t seed = 0;
};

// 2 -> 32 -> 32 -> 1 network with a logistic-sigmoid output, trained by
// minimising the binomial negative log-likelihood on the mirrored 2T sample.
struct MlpModel {
    static constexpr int kInput = 2;
    static constexpr int kHidden = 32;

    std::vector<double> w1;  // kHidden x kInput, row-major
    std::vector<double> b1;  // kHidden
    std::vector<double> w2;  // kHidden x kHidden
    std::vector<double> b2;  // kHidden
    std::vector<double> w3;  // 1 x kHidden
    std::vector<double> b3;  // 1

    MlpConfig config;
    std::vector<double> epoch_loss;  // mean train NLL after each epoch

    // Sigmoid output in (0, 1) for finite inputs.
    double output(double d0, double d1) const;

    static constexpr int parameter_count() {
        return kHidden * kInput + kHidden + kHidden * kHidden + kHidden + kHidden + 1;
    }
};

// Mirrors the training set ((d1, d0, m-n) per record), then runs seeded
// minibatch Adam. Bit-reproducible for a fixed seed. Throws TrainingError on
// a non-finite batch loss, reporting the epoch and batch.
MlpModel train_mlp(const JudgementDataset& ds, const MlpConfig& config = {});

// Fresh model with seeded fan-in scaled-uniform weights and zero biases.
MlpModel init_mlp(const MlpConfig& config = {});

// Network evaluated at the G x G cell centers; no symmetrisation pass.
DecisionSurface mlp_surface(const MlpModel& model, int resolution);

// Max relative error between analytic gradients and central finite
// differences of the mean sample loss, over all parameters.
double grad_check(const MlpModel& model, const JudgementDataset& sample, double fd_step = 1e-5);

}  // namespace afcfit
