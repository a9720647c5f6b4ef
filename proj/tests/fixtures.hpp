#pragma once

#include "diffshape/constellation.hpp"
#include "diffshape/denoiser.hpp"
#include "diffshape/schedule.hpp"

namespace test_fixtures {

// Shared across test cases so the training cost is paid once per binary.
const diffshape::Constellation& qam16();
const diffshape::VarianceSchedule& quick_sched();  // 30 steps, wider betas
const diffshape::TrainResult& quick_model();       // small but usable model

}  // namespace test_fixtures
