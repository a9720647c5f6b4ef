#include "diffshape/rng.hpp"

#include <stdexcept>

namespace diffshape {
namespace {

// splitmix64 finalizer; decorrelates nearby inputs.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a_hash(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngStream RngStream::root(std::uint64_t master_seed) {
    return RngStream{mix(master_seed)};
}

RngStream RngStream::child(std::string_view name) const {
    return RngStream{mix(state ^ fnv1a_hash(name))};
}

RngStream RngStream::child(std::uint64_t index) const {
    return RngStream{mix(state ^ mix(index ^ 0xa5a5a5a5a5a5a5a5ULL))};
}

std::mt19937_64 RngStream::engine() const {
    return std::mt19937_64{state};
}

SymbolBatch gaussian_batch(int n, std::mt19937_64& rng) {
    if (n < 0) throw std::invalid_argument("gaussian_batch: negative size");
    std::normal_distribution<double> normal(0.0, 1.0);
    SymbolBatch b(n, 2);
    for (int r = 0; r < n; ++r) {
        b(r, 0) = normal(rng);
        b(r, 1) = normal(rng);
    }
    return b;
}

}  // namespace diffshape
