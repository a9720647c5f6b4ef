#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "diffshape/channel.hpp"
#include "diffshape/constellation.hpp"
#include "diffshape/denoiser.hpp"

namespace diffshape {

// The no-shaping benchmark: every symbol equally likely.
ShapingDistribution uniform_shaping(const Constellation& c);

// Supervised benchmark classifier: 2 -> H -> H -> M, ReLU hidden layers,
// softmax over symbol indices at the head.
struct DemapperParams {
    std::array<DenseLayer, 3> layers;

    int order() const { return static_cast<int>(layers[2].w.cols()); }
    int hidden_width() const { return static_cast<int>(layers[0].w.cols()); }

    static DemapperParams init(int order, int hidden_width, std::mt19937_64& rng);
    static DemapperParams zeros(int order, int hidden_width);
};

struct DemapperConfig {
    int iterations = 5000;
    int batch_size = 256;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int hidden_width = 64;
    std::uint64_t seed = 1;
};

struct DemapperTrainResult {
    DemapperParams params;
    std::vector<double> losses;  // cross-entropy per iteration
};

// Trains on fresh (channel output, transmitted index) pairs each iteration,
// with symbols drawn uniformly; one Adam step per iteration.
DemapperTrainResult train_demapper(const Constellation& c, const ChannelSpec& channel,
                                   const DemapperConfig& cfg);

// Row-wise softmax class posteriors (N x M).
Eigen::MatrixXd demapper_posteriors(const DemapperParams& p, const SymbolBatch& y);

// Hard decisions, 1-based; ties resolve to the lowest symbol index.
std::vector<int> demap(const DemapperParams& p, const SymbolBatch& y);

}  // namespace diffshape
