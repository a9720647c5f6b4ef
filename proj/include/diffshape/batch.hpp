#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace diffshape {

// One constellation point as its in-phase / quadrature parts.
struct Point2 {
    double i = 0.0;
    double q = 0.0;
};

// Batch of N 2-D symbols, one row per sample (column 0 = I, column 1 = Q).
// All diffusion math runs on these; complex scalars are never used.
using SymbolBatch = Eigen::Matrix<double, Eigen::Dynamic, 2>;

inline void require_finite(const SymbolBatch& b, const char* what) {
    if (!b.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": batch contains non-finite values");
    }
}

inline void require_same_shape(const SymbolBatch& a, const SymbolBatch& b, const char* what) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument(std::string(what) + ": batch sizes disagree (" +
                                    std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
    }
}

}  // namespace diffshape
