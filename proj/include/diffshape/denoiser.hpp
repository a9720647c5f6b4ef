#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "diffshape/batch.hpp"
#include "diffshape/constellation.hpp"
#include "diffshape/rng.hpp"
#include "diffshape/schedule.hpp"

namespace diffshape {

struct DenseLayer {
    Eigen::MatrixXd w;  // fan_in x fan_out
    Eigen::VectorXd b;
};

// Noise-prediction network: 2 -> H -> H -> H -> 2. Hidden layers use softplus
// followed by a learned per-step multiplicative embedding (one shared T x H
// table, applied after every hidden activation); the output layer is linear.
struct DenoiserParams {
    std::array<DenseLayer, 4> layers;
    Eigen::MatrixXd time_embed;  // T x H

    int t_steps() const { return static_cast<int>(time_embed.rows()); }
    int hidden_width() const { return static_cast<int>(time_embed.cols()); }

    // Fan-in uniform weights and biases, all-ones time embedding.
    static DenoiserParams init(int t_steps, int hidden_width, std::mt19937_64& rng);
    static DenoiserParams zeros_like(const DenoiserParams& shape);
};

// Predicted noise for a batch that all sits at diffusion step t.
SymbolBatch denoiser_forward(const DenoiserParams& p, const SymbolBatch& xt, int t);

// Predicted noise with an individual step per row (training mini-batches).
SymbolBatch denoiser_forward(const DenoiserParams& p, const SymbolBatch& xt,
                             const std::vector<int>& ts);

struct BackwardResult {
    double loss = 0.0;      // mean squared noise-prediction error
    DenoiserParams grads;   // same shapes as the parameters
};

BackwardResult denoiser_backward(const DenoiserParams& p, const SymbolBatch& xt,
                                 const std::vector<int>& ts, const SymbolBatch& eps);
BackwardResult denoiser_backward(const DenoiserParams& p, const SymbolBatch& xt, int t,
                                 const SymbolBatch& eps);

struct AdamHyper {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    DenoiserParams m;
    DenoiserParams v;
    long long step = 0;

    static AdamState init_like(const DenoiserParams& p);
};

void adam_update(DenoiserParams& p, const DenoiserParams& grads, AdamState& state,
                 const AdamHyper& hyper);

struct TrainConfig {
    int epochs = 1000;
    int batch_size = 256;
    int draws_per_point = 256;  // virtual epoch size is order * draws_per_point
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int hidden_width = 128;
    std::uint64_t seed = 1;
};

struct TrainResult {
    DenoiserParams params;
    std::vector<double> losses;  // one entry per optimizer step
};

// Trains the noise predictor on uniformly drawn constellation points. Each
// step samples fresh (symbol, t, eps) triples, diffuses to the per-row step
// and takes one Adam update; an epoch is ceil(order * draws_per_point /
// batch_size) steps. Fully deterministic for a fixed config.
TrainResult train_denoiser(const Constellation& c, const VarianceSchedule& sched,
                           const TrainConfig& cfg);

}  // namespace diffshape
