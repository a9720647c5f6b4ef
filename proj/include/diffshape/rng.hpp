#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "diffshape/batch.hpp"

namespace diffshape {

// Deterministic stream of seeds derived from one master seed.
//
// Every stochastic stage (training, shaping noise, channel noise, receiver
// noise, ...) pulls its own named child stream, so reordering or skipping one
// stage never perturbs the draws of another. Children of children are fine:
// root(seed).child("sweep").child(point_index).child("channel").
struct RngStream {
    std::uint64_t state = 0;

    static RngStream root(std::uint64_t master_seed);

    RngStream child(std::string_view name) const;
    RngStream child(std::uint64_t index) const;

    // Fresh engine seeded from this stream; draws from separate engines of
    // distinct streams are statistically independent for our purposes.
    std::mt19937_64 engine() const;
};

// n x 2 batch of standard normal draws, filled row by row (I before Q).
SymbolBatch gaussian_batch(int n, std::mt19937_64& rng);

// FNV-1a, used for stream-name derivation and config fingerprints.
std::uint64_t fnv1a_hash(std::string_view s);

}  // namespace diffshape
