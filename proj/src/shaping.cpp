#include "diffshape/shaping.hpp"

#include <cmath>
#include <stdexcept>

#include "diffshape/channel.hpp"
#include "diffshape/diffusion.hpp"

namespace diffshape {
namespace {

// Fixed so results never depend on caller-side batch splitting; 8k rows keeps
// the per-chunk working set cache-friendly.
constexpr Eigen::Index kReverseChunk = 8192;

}  // namespace

SymbolBatch run_reverse(const DenoiserParams& p, const VarianceSchedule& sched, SymbolBatch x,
                        const RngStream& stream) {
    if (p.t_steps() != sched.t_steps()) {
        throw std::invalid_argument("run_reverse: model and schedule disagree on t_steps");
    }
    require_finite(x, "run_reverse");

    const int t_max = sched.t_steps();
    const Eigen::Index n = x.rows();
    for (Eigen::Index start = 0, chunk = 0; start < n; start += kReverseChunk, ++chunk) {
        const Eigen::Index len = std::min(kReverseChunk, n - start);
        auto rng = stream.child(static_cast<std::uint64_t>(chunk)).engine();
        SymbolBatch sub = x.middleRows(start, len);
        const SymbolBatch zero = SymbolBatch::Zero(len, 2);
        for (int t = t_max; t >= 1; --t) {
            const SymbolBatch eps_hat = denoiser_forward(p, sub, t);
            if (t > 1) {
                const SymbolBatch z = gaussian_batch(static_cast<int>(len), rng);
                sub = reverse_step(sub, eps_hat, z, t, sched);
            } else {
                sub = reverse_step(sub, eps_hat, zero, t, sched);
            }
        }
        x.middleRows(start, len) = sub;
    }
    return x;
}

ShapingDistribution shape(const DenoiserParams& p, const VarianceSchedule& sched,
                          const Constellation& c, const ShapingRequest& req) {
    if (req.n_samples < 1) throw std::invalid_argument("shape: n_samples must be >= 1");
    const double delta2 = noise_power_from_snr(req.snr_db, req.transmit_power);

    const RngStream root = RngStream::root(req.seed);
    auto symbol_rng = root.child("symbols").engine();
    const ShapingDistribution uniform{std::vector<double>(
        static_cast<std::size_t>(c.order), 1.0 / static_cast<double>(c.order))};
    DrawnSymbols drawn = sample_symbols(uniform, c, req.n_samples, symbol_rng);

    auto noise_rng = root.child("noise").engine();
    const double per_coord = std::sqrt(delta2 / 2.0);
    SymbolBatch noisy = drawn.points + per_coord * gaussian_batch(req.n_samples, noise_rng);

    const SymbolBatch denoised = run_reverse(p, sched, std::move(noisy), root.child("reverse"));
    const Projection proj = project(denoised, c);
    return to_distribution(count_occurrences(proj.indices, c));
}

}  // namespace diffshape
