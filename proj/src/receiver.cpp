#include "diffshape/receiver.hpp"

#include <stdexcept>

#include "diffshape/shaping.hpp"

namespace diffshape {
namespace {

Projection one_pass(const DenoiserParams& p, const VarianceSchedule& sched, const Constellation& c,
                    const SymbolBatch& received, const RngStream& pass_stream) {
    const SymbolBatch denoised = run_reverse(p, sched, received, pass_stream);
    return project(denoised, c);
}

}  // namespace

Projection reconstruct(const DenoiserParams& p, const VarianceSchedule& sched,
                       const Constellation& c, const SymbolBatch& received,
                       const RngStream& stream) {
    return one_pass(p, sched, c, received, stream.child(std::uint64_t{0}));
}

Eigen::MatrixXi decision_histogram(const DenoiserParams& p, const VarianceSchedule& sched,
                                   const Constellation& c, const SymbolBatch& received, int passes,
                                   const RngStream& stream) {
    if (passes < 1) throw std::invalid_argument("decision_histogram: passes must be >= 1");
    Eigen::MatrixXi hist = Eigen::MatrixXi::Zero(received.rows(), c.order);
    for (int pass = 0; pass < passes; ++pass) {
        const Projection rec = one_pass(p, sched, c, received,
                                        stream.child(static_cast<std::uint64_t>(pass)));
        for (Eigen::Index r = 0; r < received.rows(); ++r) {
            hist(r, rec.indices[static_cast<std::size_t>(r)] - 1) += 1;
        }
    }
    return hist;
}

}  // namespace diffshape
