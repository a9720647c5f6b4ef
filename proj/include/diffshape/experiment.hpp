#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "diffshape/baseline.hpp"
#include "diffshape/checkpoint.hpp"
#include "diffshape/config.hpp"
#include "diffshape/constellation.hpp"
#include "diffshape/denoiser.hpp"
#include "diffshape/schedule.hpp"

namespace diffshape {

struct SweepRow {
    Scheme scheme = Scheme::ddpm;
    NoiseKind channel = NoiseKind::awgn;
    double snr_db = 0.0;
    double mi_bits = 0.0;
    double ser = 0.0;
    double entropy_tx = 0.0;
    std::uint64_t seed = 0;
};

// One sweep point, fully deterministic from the master seed via named
// sub-streams. Symbol draws and all z streams depend on (scheme, snr) but not
// on the channel kind, so in-distribution and OOD rows of the same point
// differ only by the noise the channel actually adds.
//
// Scheme semantics (transmit distribution -> channel -> decision rule):
//  - ddpm: symbols drawn from the SNR-shaped distribution, reconstructed at
//    the receiver with the reverse chain;
//  - uniform: uniformly drawn symbols, same reverse-chain receiver;
//  - dnn: uniformly drawn symbols, decisions from the supervised demapper
//    (required argument, trained per SNR).
// Metrics compare transmitted and decided symbol indices.
SweepRow evaluate_point(const ExperimentConfig& cfg, const DenoiserParams& model,
                        const VarianceSchedule& sched, const Constellation& c, Scheme scheme,
                        NoiseKind channel, double snr_db, const DemapperParams* demapper);

// Demapper per evaluation SNR, each trained on AWGN at that SNR (the OOD
// channel never retrains it, mirroring the un-retrained denoiser).
std::map<double, DemapperParams> train_demappers(const ExperimentConfig& cfg,
                                                 const Constellation& c);

// All (scheme, channel, snr) combinations of the config, rows sorted by
// (scheme, channel, snr). Points run on cfg.jobs workers; results and row
// order never depend on the worker count. on_row (if set) fires once per
// finished row, serialized.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const DenoiserParams& model,
                                const VarianceSchedule& sched, const Constellation& c,
                                const std::function<void(const SweepRow&)>& on_row = {});

std::string sweep_csv_text(const std::vector<SweepRow>& rows, const std::string& comment);

// Mutual-information-vs-SNR chart, one series per (scheme, channel) pair.
std::string sweep_chart_svg(const std::vector<SweepRow>& rows, const std::string& title);

struct TrainedModel {
    Checkpoint checkpoint;
    std::vector<double> losses;
};

// Builds constellation and schedule from the config, trains the denoiser and
// packages it with provenance metadata (config hash, seed, canonical config).
TrainedModel train_from_config(const ExperimentConfig& cfg);

}  // namespace diffshape
