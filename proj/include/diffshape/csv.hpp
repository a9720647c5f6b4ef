#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffshape/batch.hpp"
#include "diffshape/constellation.hpp"

namespace diffshape {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Comment line placed at the top of every produced CSV so each file records
// where its numbers came from.
std::string provenance_comment(const std::string& config_hash, std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string training_log_csv(const std::vector<double>& losses, const std::string& comment);
std::string distribution_csv(const Constellation& c, const ShapingDistribution& dist,
                             const std::string& comment);
std::string reconstruction_csv(const SymbolBatch& y, const std::vector<int>& indices,
                               const std::string& comment);
// Long-format vote counts: one row per (input sample, symbol) with a nonzero
// count, symbols ascending within a sample.
std::string histogram_csv(const SymbolBatch& y, const Eigen::MatrixXi& hist,
                          const std::string& comment);

// Parses `i,q` rows (optional header, `#` comments); errors name the line.
SymbolBatch read_iq_csv(const std::string& path);

}  // namespace diffshape
