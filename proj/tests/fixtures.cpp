#include "fixtures.hpp"

namespace test_fixtures {

using namespace diffshape;

const Constellation& qam16() {
    static const Constellation c = make_qam(16);
    return c;
}

const VarianceSchedule& quick_sched() {
    static const VarianceSchedule s = VarianceSchedule::linear(30, 1e-4, 0.05);
    return s;
}

const TrainResult& quick_model() {
    static const TrainResult r = [] {
        TrainConfig cfg;
        cfg.epochs = 80;
        cfg.batch_size = 256;
        cfg.draws_per_point = 64;
        cfg.hidden_width = 64;
        cfg.seed = 7;
        return train_denoiser(qam16(), quick_sched(), cfg);
    }();
    return r;
}

}  // namespace test_fixtures
