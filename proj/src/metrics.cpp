#include "diffshape/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace diffshape {
namespace {

void check_index(int idx, int m, const char* what) {
    if (idx < 1 || idx > m) {
        throw std::out_of_range(std::string(what) + ": symbol index " + std::to_string(idx) +
                                " outside 1.." + std::to_string(m));
    }
}

void check_pmf(const ShapingDistribution& d, const char* what) {
    if (d.probs.empty()) throw std::invalid_argument(std::string(what) + ": empty distribution");
    double sum = 0.0;
    for (double p : d.probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument(std::string(what) + ": invalid probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string(what) + ": probabilities sum to " +
                                    std::to_string(sum));
    }
}

}  // namespace

double mutual_information_bits(const std::vector<int>& a, const std::vector<int>& b, int m) {
    if (m < 1) throw std::invalid_argument("mutual_information: alphabet size must be >= 1");
    if (a.size() != b.size()) {
        throw std::invalid_argument("mutual_information: streams differ in length");
    }
    if (a.empty()) throw std::invalid_argument("mutual_information: empty streams");

    const std::size_t mm = static_cast<std::size_t>(m);
    std::vector<double> joint(mm * mm, 0.0);
    std::vector<double> pa(mm, 0.0);
    std::vector<double> pb(mm, 0.0);
    const double w = 1.0 / static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        check_index(a[i], m, "mutual_information");
        check_index(b[i], m, "mutual_information");
        const std::size_t ja = static_cast<std::size_t>(a[i] - 1);
        const std::size_t jb = static_cast<std::size_t>(b[i] - 1);
        joint[ja * mm + jb] += w;
        pa[ja] += w;
        pb[jb] += w;
    }

    double mi = 0.0;
    for (std::size_t ja = 0; ja < mm; ++ja) {
        for (std::size_t jb = 0; jb < mm; ++jb) {
            const double p = joint[ja * mm + jb];
            if (p > 0.0) mi += p * std::log2(p / (pa[ja] * pb[jb]));
        }
    }
    return mi < 0.0 ? 0.0 : mi;  // clamp tiny negative rounding residue
}

double symbol_error_rate(const std::vector<int>& tx, const std::vector<int>& rx) {
    if (tx.size() != rx.size()) {
        throw std::invalid_argument("symbol_error_rate: streams differ in length");
    }
    if (tx.empty()) throw std::invalid_argument("symbol_error_rate: empty streams");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        if (tx[i] != rx[i]) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(tx.size());
}

double entropy_bits(const ShapingDistribution& dist) {
    check_pmf(dist, "entropy");
    double h = 0.0;
    for (double p : dist.probs) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double total_variation(const ShapingDistribution& a, const ShapingDistribution& b) {
    check_pmf(a, "total_variation");
    check_pmf(b, "total_variation");
    if (a.probs.size() != b.probs.size()) {
        throw std::invalid_argument("total_variation: distributions differ in size");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.probs.size(); ++i) {
        s += std::abs(a.probs[i] - b.probs[i]);
    }
    return 0.5 * s;
}

}  // namespace diffshape
