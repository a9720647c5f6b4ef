#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "diffshape/denoiser.hpp"
#include "diffshape/schedule.hpp"

namespace diffshape {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything needed to rebuild a trained model: parameters, the exact noise
// schedule, the constellation order it was fitted to, and free-form metadata
// (config echo, seed) that never influences computation.
struct Checkpoint {
    DenoiserParams params;
    VarianceSchedule schedule;
    int modulation_order = 0;
    nlohmann::json meta;
};

// JSON text with sorted keys and round-trip-exact doubles, so
// serialize(parse(s)) == s for any serialized checkpoint.
std::string serialize_checkpoint(const Checkpoint& ck);
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint_file(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint_file(const std::string& path);

}  // namespace diffshape
