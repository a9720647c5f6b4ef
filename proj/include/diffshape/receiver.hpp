#pragma once

#include "diffshape/constellation.hpp"
#include "diffshape/denoiser.hpp"
#include "diffshape/rng.hpp"
#include "diffshape/schedule.hpp"

namespace diffshape {

// Symbol decisions from a noisy received batch: treat it as the terminal
// diffusion state, run the full reverse chain, snap every output to the
// nearest constellation point. Deterministic given the stream.
Projection reconstruct(const DenoiserParams& p, const VarianceSchedule& sched,
                       const Constellation& c, const SymbolBatch& received,
                       const RngStream& stream);

// Soft variant: `passes` independent stochastic reconstructions of the same
// batch; entry (r, k) counts how often row r decided for symbol k + 1. A
// single pass reproduces reconstruct() exactly.
Eigen::MatrixXi decision_histogram(const DenoiserParams& p, const VarianceSchedule& sched,
                                   const Constellation& c, const SymbolBatch& received, int passes,
                                   const RngStream& stream);

}  // namespace diffshape
