#pragma once

#include <cstdint>

#include "diffshape/constellation.hpp"
#include "diffshape/denoiser.hpp"
#include "diffshape/rng.hpp"
#include "diffshape/schedule.hpp"

namespace diffshape {

// Full reverse pass t = T..1 over a batch: each step predicts the noise with
// the model and applies the sampling update, injecting fresh Gaussian z except
// at the final step. The batch is processed in fixed-size chunks with one RNG
// sub-stream per chunk, so the output is independent of how callers split
// work and memory stays flat for large batches.
SymbolBatch run_reverse(const DenoiserParams& p, const VarianceSchedule& sched, SymbolBatch x,
                        const RngStream& stream);

struct ShapingRequest {
    double snr_db = 0.0;        // channel SNR the distribution is shaped for
    int n_samples = 10000;      // observations used to build the histogram
    double transmit_power = 1.0;
    std::uint64_t seed = 0;
};

// SNR-adaptive shaped distribution: perturb uniformly drawn constellation
// points with synthetic noise at the channel's noise power (delta/sqrt(2) per
// coordinate), denoise the whole batch with the reverse chain, snap to the
// grid and normalize the occurrence counts.
ShapingDistribution shape(const DenoiserParams& p, const VarianceSchedule& sched,
                          const Constellation& c, const ShapingRequest& req);

}  // namespace diffshape
