#pragma once

#include <random>
#include <string>
#include <string_view>

#include "diffshape/batch.hpp"

namespace diffshape {

enum class NoiseKind { awgn, laplacian };

NoiseKind parse_noise_kind(std::string_view name);  // "awgn" | "laplacian"
std::string_view noise_kind_name(NoiseKind kind);

struct ChannelSpec {
    NoiseKind kind = NoiseKind::awgn;
    double snr_db = 0.0;  // +infinity means a noiseless channel
    double transmit_power = 1.0;
};

// Total 2-D noise power delta^2 = P * 10^(-snr/10); each coordinate carries
// half of it. Returns 0 for an infinite SNR.
double noise_power_from_snr(double snr_db, double transmit_power);

// y = x + n with i.i.d. per-coordinate noise of variance delta^2 / 2: Gaussian
// for AWGN, zero-mean Laplace with matching variance otherwise.
SymbolBatch transmit(const SymbolBatch& x, const ChannelSpec& spec, std::mt19937_64& rng);

}  // namespace diffshape
