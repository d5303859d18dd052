#include "afcfit/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "afcfit/common.hpp"
#include "afcfit/kern.hpp"
#include "afcfit/metrics.hpp"
#include "afcfit/rng.hpp"

namespace afcfit {

namespace {

constexpr int kIn = MlpModel::kInput;
constexpr int kHid = MlpModel::kHidden;

struct Sample {
    double x0, x1;
    int n, m;
};

double activate(HiddenActivation act, double z) {
    return act == HiddenActivation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

double activate_grad(HiddenActivation act, double z, double h) {
    if (act == HiddenActivation::relu) return z > 0.0 ? 1.0 : 0.0;
    return 1.0 - h * h;  // tanh'
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Workspace {
    double z1[kHid], h1[kHid], z2[kHid], h2[kHid];
};

double forward(const MlpModel& model, double x0, double x1, Workspace& ws) {
    const HiddenActivation act = model.config.activation;
    for (int i = 0; i < kHid; ++i) {
        ws.z1[i] = model.w1[static_cast<std::size_t>(i) * kIn] * x0 +
                   model.w1[static_cast<std::size_t>(i) * kIn + 1] * x1 + model.b1[i];
        ws.h1[i] = activate(act, ws.z1[i]);
    }
    for (int i = 0; i < kHid; ++i) {
        ws.z2[i] = kern::dot(model.w2.data() + static_cast<std::size_t>(i) * kHid, ws.h1, kHid) +
                   model.b2[i];
        ws.h2[i] = activate(act, ws.z2[i]);
    }
    const double z3 = kern::dot(model.w3.data(), ws.h2, kHid) + model.b3[0];
    return sigmoid(z3);
}

struct Gradients {
    std::vector<double> w1, b1, w2, b2, w3, b3;

    explicit Gradients(bool zeroed = true) {
        w1.assign(kHid * kIn, 0.0);
        b1.assign(kHid, 0.0);
        w2.assign(static_cast<std::size_t>(kHid) * kHid, 0.0);
        b2.assign(kHid, 0.0);
        w3.assign(kHid, 0.0);
        b3.assign(1, 0.0);
        (void)zeroed;
    }
};

// Accumulates dLoss/dParams for one sample into grads and returns the sample
// loss. dLoss/dz3 = m p - n; the log-binomial-coefficient term is constant in
// the parameters.
double backward_sample(const MlpModel& model, const Sample& s, Gradients& grads, Workspace& ws) {
    const HiddenActivation act = model.config.activation;
    const double p = forward(model, s.x0, s.x1, ws);
    const double loss =
        -std::log(std::max(binomial_pmf(s.n, s.m, std::clamp(p, 0.0, 1.0)), kProbabilityFloor));

    const double delta3 = s.m * p - s.n;

    double delta2[kHid];
    for (int i = 0; i < kHid; ++i) {
        delta2[i] = model.w3[i] * delta3 * activate_grad(act, ws.z2[i], ws.h2[i]);
    }
    double delta1[kHid];
    for (int j = 0; j < kHid; ++j) {
        double acc = 0.0;
        for (int i = 0; i < kHid; ++i) {
            acc += model.w2[static_cast<std::size_t>(i) * kHid + j] * delta2[i];
        }
        delta1[j] = acc * activate_grad(act, ws.z1[j], ws.h1[j]);
    }

    kern::outer_acc(grads.w3.data(), &delta3, 1, ws.h2, kHid);
    grads.b3[0] += delta3;
    kern::outer_acc(grads.w2.data(), delta2, kHid, ws.h1, kHid);
    for (int i = 0; i < kHid; ++i) grads.b2[i] += delta2[i];
    const double x[kIn] = {s.x0, s.x1};
    kern::outer_acc(grads.w1.data(), delta1, kHid, x, kIn);
    for (int i = 0; i < kHid; ++i) grads.b1[i] += delta1[i];
    return loss;
}

struct AdamState {
    std::vector<double> m, v;
    std::int64_t step = 0;

    explicit AdamState(std::size_t size) : m(size, 0.0), v(size, 0.0) {}
};

void adam_update(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
                 std::size_t offset, const MlpConfig& cfg, double bias1, double bias2) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        const std::size_t s = offset + i;
        state.m[s] = cfg.beta1 * state.m[s] + (1.0 - cfg.beta1) * grads[i];
        state.v[s] = cfg.beta2 * state.v[s] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[s] / bias1;
        const double v_hat = state.v[s] / bias2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
    }
}

std::vector<Sample> mirrored_samples(const JudgementDataset& ds) {
    std::vector<Sample> samples;
    samples.reserve(2 * ds.records.size());
    for (const auto& rec : ds.records) {
        samples.push_back({rec.d0, rec.d1, rec.n, rec.m});
    }
    for (const auto& rec : ds.records) {
        samples.push_back({rec.d1, rec.d0, rec.m - rec.n, rec.m});
    }
    return samples;
}

double mean_loss(const MlpModel& model, const std::vector<Sample>& samples) {
    Workspace ws;
    double total = 0.0;
    for (const auto& s : samples) {
        const double p = forward(model, s.x0, s.x1, ws);
        total += -std::log(
            std::max(binomial_pmf(s.n, s.m, std::clamp(p, 0.0, 1.0)), kProbabilityFloor));
    }
    return total / static_cast<double>(samples.size());
}

void seeded_shuffle(std::vector<std::uint32_t>& order, CounterRng& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = rng.next_below(i);
        std::swap(order[i - 1], order[j]);
    }
}

// Flattened parameter access for grad_check.
std::vector<std::vector<double>*> param_blocks(MlpModel& model) {
    return {&model.w1, &model.b1, &model.w2, &model.b2, &model.w3, &model.b3};
}

}  // namespace

double MlpModel::output(double d0, double d1) const {
    Workspace ws;
    return forward(*this, d0, d1, ws);
}

MlpModel init_mlp(const MlpConfig& config) {
    MlpModel model;
    model.config = config;
    CounterRng rng(config.seed, 0);
    const auto fill = [&rng](std::vector<double>& w, std::size_t size, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        w.resize(size);
        for (auto& v : w) v = (2.0 * rng.next_unit() - 1.0) * bound;
    };
    fill(model.w1, static_cast<std::size_t>(kHid) * kIn, kIn);
    model.b1.assign(kHid, 0.0);
    fill(model.w2, static_cast<std::size_t>(kHid) * kHid, kHid);
    model.b2.assign(kHid, 0.0);
    fill(model.w3, kHid, kHid);
    model.b3.assign(1, 0.0);
    return model;
}

MlpModel train_mlp(const JudgementDataset& ds, const MlpConfig& config) {
    if (config.epochs < 1) throw ConfigError(cat("train_mlp: epochs must be >= 1, got ",
                                                 config.epochs));
    if (config.batch_size < 1) {
        throw ConfigError(cat("train_mlp: batch size must be >= 1, got ", config.batch_size));
    }
    if (!(config.learning_rate > 0.0)) {
        throw ConfigError(cat("train_mlp: learning rate must be positive, got ",
                              config.learning_rate));
    }

    MlpModel model = init_mlp(config);
    const std::vector<Sample> samples = mirrored_samples(ds);

    std::vector<std::uint32_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0u);

    const std::size_t total_params = static_cast<std::size_t>(MlpModel::parameter_count());
    AdamState adam(total_params);
    Gradients grads;
    Workspace ws;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        CounterRng shuffle_rng(config.seed, 1 + static_cast<std::uint64_t>(epoch));
        seeded_shuffle(order, shuffle_rng);

        const std::size_t batch = static_cast<std::size_t>(config.batch_size);
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin < samples.size(); begin += batch, ++batch_index) {
            const std::size_t end = std::min(begin + batch, samples.size());
            const double count = static_cast<double>(end - begin);

            std::fill(grads.w1.begin(), grads.w1.end(), 0.0);
            std::fill(grads.b1.begin(), grads.b1.end(), 0.0);
            std::fill(grads.w2.begin(), grads.w2.end(), 0.0);
            std::fill(grads.b2.begin(), grads.b2.end(), 0.0);
            std::fill(grads.w3.begin(), grads.w3.end(), 0.0);
            std::fill(grads.b3.begin(), grads.b3.end(), 0.0);

            double batch_loss = 0.0;
            for (std::size_t s = begin; s < end; ++s) {
                batch_loss += backward_sample(model, samples[order[s]], grads, ws);
            }
            batch_loss /= count;
            if (!std::isfinite(batch_loss)) {
                throw TrainingError(cat("train_mlp: non-finite loss at epoch ", epoch,
                                        ", batch ", batch_index));
            }

            const double inv = 1.0 / count;
            for (auto* block : {&grads.w1, &grads.b1, &grads.w2, &grads.b2, &grads.w3, &grads.b3}) {
                kern::scale(block->data(), inv, block->size());
            }

            ++adam.step;
            const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(adam.step));
            const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(adam.step));
            std::size_t offset = 0;
            adam_update(model.w1, grads.w1, adam, offset, config, bias1, bias2);
            offset += grads.w1.size();
            adam_update(model.b1, grads.b1, adam, offset, config, bias1, bias2);
            offset += grads.b1.size();
            adam_update(model.w2, grads.w2, adam, offset, config, bias1, bias2);
            offset += grads.w2.size();
            adam_update(model.b2, grads.b2, adam, offset, config, bias1, bias2);
            offset += grads.b2.size();
            adam_update(model.w3, grads.w3, adam, offset, config, bias1, bias2);
            offset += grads.w3.size();
            adam_update(model.b3, grads.b3, adam, offset, config, bias1, bias2);
        }
        model.epoch_loss.push_back(mean_loss(model, samples));
    }
    return model;
}

DecisionSurface mlp_surface(const MlpModel& model, int resolution) {
    if (resolution < 2) {
        throw ConfigError(cat("mlp_surface: resolution must be >= 2, got ", resolution));
    }
    DecisionSurface surface;
    surface.resolution = resolution;
    surface.sigma = 0.0;
    surface.source = SurfaceSource::mlp;
    surface.values.resize(static_cast<std::size_t>(resolution) * resolution);
    surface.undefined.assign(surface.values.size(), 0);
    Workspace ws;
    for (int i = 0; i < resolution; ++i) {
        for (int k = 0; k < resolution; ++k) {
            surface.values[static_cast<std::size_t>(i) * resolution + k] =
                forward(model, DensityGrid::cell_center(i, resolution),
                        DensityGrid::cell_center(k, resolution), ws);
        }
    }
    return surface;
}

double grad_check(const MlpModel& model, const JudgementDataset& sample, double fd_step) {
    if (sample.records.size() > 64) {
        throw InputError(cat("grad_check: sample must have <= 64 records, got ",
                             sample.records.size()));
    }
    std::vector<Sample> samples;
    samples.reserve(sample.records.size());
    for (const auto& rec : sample.records) samples.push_back({rec.d0, rec.d1, rec.n, rec.m});

    MlpModel probe = model;
    Gradients grads;
    Workspace ws;
    for (const auto& s : samples) backward_sample(probe, s, grads, ws);
    const double inv = 1.0 / static_cast<double>(samples.size());

    double max_rel = 0.0;
    std::vector<std::vector<double>*> blocks = param_blocks(probe);
    const std::vector<const std::vector<double>*> grad_blocks = {&grads.w1, &grads.b1, &grads.w2,
                                                                 &grads.b2, &grads.w3, &grads.b3};
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto& params = *blocks[b];
        const auto& analytic = *grad_blocks[b];
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double saved = params[i];
            params[i] = saved + fd_step;
            const double up = mean_loss(probe, samples);
            params[i] = saved - fd_step;
            const double down = mean_loss(probe, samples);
            params[i] = saved;
            const double fd = (up - down) / (2.0 * fd_step);
            const double an = analytic[i] * inv;
            const double rel = std::abs(an - fd) / std::max(std::abs(an) + std::abs(fd), 1e-8);
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

}  // namespace afcfit
