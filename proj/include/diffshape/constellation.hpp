#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "diffshape/batch.hpp"

namespace diffshape {

// Square QAM grid normalized to unit average power under uniform symbol use.
//
// Symbol indices are 1-based. Enumeration order is fixed: ascending I first,
// ascending Q within each I column, so index k (1-based, with m = sqrt(M)):
//   i_level = (k - 1) / m,  q_level = (k - 1) % m,
//   point = scale * (2 * level - m + 1) on each axis.
struct Constellation {
    int order = 0;                           // M in {4, 16, 64, 256}
    SymbolBatch points;                      // M x 2; row k - 1 holds symbol k
    std::vector<std::uint32_t> gray_labels;  // per-axis reflected Gray bits, metadata only

    int bits_per_symbol() const;
    Point2 point(int symbol_index) const;    // 1-based, range-checked
};

Constellation make_qam(int order);

struct Projection {
    SymbolBatch points;        // nearest grid point per input row
    std::vector<int> indices;  // matching 1-based symbol indices
};

// Nearest-point quantization in Euclidean distance; exact ties resolve to the
// lowest symbol index.
Projection project(const SymbolBatch& batch, const Constellation& c);

// Histogram of symbol indices; throws on any index outside 1..M.
std::vector<long long> count_occurrences(const std::vector<int>& indices, const Constellation& c);

// Probability mass function over the M symbols, indexed by symbol_index - 1.
struct ShapingDistribution {
    std::vector<double> probs;
};

ShapingDistribution to_distribution(const std::vector<long long>& counts);

struct DrawnSymbols {
    SymbolBatch points;
    std::vector<int> indices;
};

// n i.i.d. draws from dist via inverse-CDF lookup, one uniform per draw.
DrawnSymbols sample_symbols(const ShapingDistribution& dist, const Constellation& c, int n,
                            std::mt19937_64& rng);

}  // namespace diffshape
