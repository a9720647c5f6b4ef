#include "diffshape/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "diffshape/rng.hpp"

namespace diffshape {

NoiseKind parse_noise_kind(std::string_view name) {
    if (name == "awgn") return NoiseKind::awgn;
    if (name == "laplacian") return NoiseKind::laplacian;
    throw std::invalid_argument("channel: unknown noise kind '" + std::string(name) +
                                "' (expected awgn or laplacian)");
}

std::string_view noise_kind_name(NoiseKind kind) {
    return kind == NoiseKind::awgn ? "awgn" : "laplacian";
}

double noise_power_from_snr(double snr_db, double transmit_power) {
    if (!(transmit_power > 0.0) || !std::isfinite(transmit_power)) {
        throw std::invalid_argument("channel: transmit power must be positive and finite");
    }
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("channel: SNR must be finite or +infinity");
    }
    if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
    return transmit_power * std::pow(10.0, -snr_db / 10.0);
}

SymbolBatch transmit(const SymbolBatch& x, const ChannelSpec& spec, std::mt19937_64& rng) {
    require_finite(x, "transmit");
    const double delta2 = noise_power_from_snr(spec.snr_db, spec.transmit_power);
    if (delta2 == 0.0) return x;

    const Eigen::Index n = x.rows();
    if (spec.kind == NoiseKind::awgn) {
        const double sigma = std::sqrt(delta2 / 2.0);
        return x + sigma * gaussian_batch(static_cast<int>(n), rng);
    }

    // Laplace scale b with per-coordinate variance 2 b^2 = delta^2 / 2.
    const double b = std::sqrt(delta2) / 2.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SymbolBatch y(n, 2);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (int c = 0; c < 2; ++c) {
            const double u = unif(rng) - 0.5;
            double tail = 1.0 - 2.0 * std::abs(u);
            if (tail < 1e-300) tail = 1e-300;  // clip the unbounded inverse-CDF tail
            const double mag = -b * std::log(tail);
            y(r, c) = x(r, c) + (u < 0.0 ? -mag : mag);
        }
    }
    return y;
}

}  // namespace diffshape
