#include "diffshape/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace diffshape {
namespace {

bool is_supported_order(int order) {
    return order == 4 || order == 16 || order == 64 || order == 256;
}

std::uint32_t gray(std::uint32_t v) { return v ^ (v >> 1); }

}  // namespace

int Constellation::bits_per_symbol() const {
    int bits = 0;
    for (int m = order; m > 1; m /= 2) ++bits;
    return bits;
}

Point2 Constellation::point(int symbol_index) const {
    if (symbol_index < 1 || symbol_index > order) {
        throw std::out_of_range("constellation: symbol index " + std::to_string(symbol_index) +
                                " outside 1.." + std::to_string(order));
    }
    return Point2{points(symbol_index - 1, 0), points(symbol_index - 1, 1)};
}

Constellation make_qam(int order) {
    if (!is_supported_order(order)) {
        throw std::invalid_argument("constellation: unsupported order " + std::to_string(order) +
                                    " (expected 4, 16, 64 or 256)");
    }
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    // Per-axis mean square of the odd-integer levels is (m^2 - 1) / 3; the two
    // axes together give the average power we normalize away.
    const double scale = 1.0 / std::sqrt(2.0 * (m * m - 1) / 3.0);

    int axis_bits = 0;
    for (int v = m; v > 1; v /= 2) ++axis_bits;

    Constellation c;
    c.order = order;
    c.points.resize(order, 2);
    c.gray_labels.resize(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        const int i_level = k / m;
        const int q_level = k % m;
        c.points(k, 0) = scale * (2 * i_level - m + 1);
        c.points(k, 1) = scale * (2 * q_level - m + 1);
        c.gray_labels[static_cast<std::size_t>(k)] =
            (gray(static_cast<std::uint32_t>(i_level)) << axis_bits) |
            gray(static_cast<std::uint32_t>(q_level));
    }
    return c;
}

Projection project(const SymbolBatch& batch, const Constellation& c) {
    require_finite(batch, "project");
    const Eigen::Index n = batch.rows();

    Projection out;
    out.points.resize(n, 2);
    out.indices.resize(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < c.order; ++k) {
            const double di = batch(r, 0) - c.points(k, 0);
            const double dq = batch(r, 1) - c.points(k, 1);
            const double d = di * di + dq * dq;
            if (d < best_d) {  // strict: ties keep the lowest index
                best_d = d;
                best = k;
            }
        }
        out.points(r, 0) = c.points(best, 0);
        out.points(r, 1) = c.points(best, 1);
        out.indices[static_cast<std::size_t>(r)] = best + 1;
    }
    return out;
}

std::vector<long long> count_occurrences(const std::vector<int>& indices, const Constellation& c) {
    std::vector<long long> counts(static_cast<std::size_t>(c.order), 0);
    for (int idx : indices) {
        if (idx < 1 || idx > c.order) {
            throw std::out_of_range("count_occurrences: symbol index " + std::to_string(idx) +
                                    " outside 1.." + std::to_string(c.order));
        }
        ++counts[static_cast<std::size_t>(idx - 1)];
    }
    return counts;
}

ShapingDistribution to_distribution(const std::vector<long long>& counts) {
    long long total = 0;
    for (long long v : counts) {
        if (v < 0) throw std::invalid_argument("to_distribution: negative count");
        total += v;
    }
    if (total == 0) throw std::invalid_argument("to_distribution: all counts are zero");

    ShapingDistribution dist;
    dist.probs.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        dist.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return dist;
}

DrawnSymbols sample_symbols(const ShapingDistribution& dist, const Constellation& c, int n,
                            std::mt19937_64& rng) {
    if (static_cast<int>(dist.probs.size()) != c.order) {
        throw std::invalid_argument("sample_symbols: distribution size does not match order");
    }
    if (n < 1) throw std::invalid_argument("sample_symbols: sample count must be >= 1");

    std::vector<double> cdf(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        if (!(dist.probs[i] >= 0.0)) {
            throw std::invalid_argument("sample_symbols: negative probability");
        }
        acc += dist.probs[i];
        cdf[i] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9) {
        throw std::invalid_argument("sample_symbols: probabilities sum to " + std::to_string(acc));
    }
    cdf.back() = 1.0;

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    DrawnSymbols out;
    out.points.resize(n, 2);
    out.indices.resize(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        const double u = unif(rng);
        // First bucket with cdf strictly above u: zero-probability symbols are
        // CDF plateaus and can never be selected, even at u == 0.
        int k = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (k >= c.order) k = c.order - 1;
        out.points(r, 0) = c.points(k, 0);
        out.points(r, 1) = c.points(k, 1);
        out.indices[static_cast<std::size_t>(r)] = k + 1;
    }
    return out;
}

}  // namespace diffshape
