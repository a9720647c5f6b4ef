#pragma once

#include <vector>

#include "diffshape/constellation.hpp"

namespace diffshape {

// Plug-in mutual information in bits between two symbol-index streams, from
// their empirical joint histogram over {1..m}^2. Zero-probability cells
// contribute nothing.
double mutual_information_bits(const std::vector<int>& a, const std::vector<int>& b, int m);

// Fraction of positions where the streams disagree.
double symbol_error_rate(const std::vector<int>& tx, const std::vector<int>& rx);

// Shannon entropy in bits; 0 log 0 counts as 0.
double entropy_bits(const ShapingDistribution& dist);

// Total variation distance, 0.5 * sum |a_i - b_i|, in [0, 1].
double total_variation(const ShapingDistribution& a, const ShapingDistribution& b);

}  // namespace diffshape
