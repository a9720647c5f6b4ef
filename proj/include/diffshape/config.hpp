#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffshape/channel.hpp"

namespace diffshape {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scheme { ddpm, uniform, dnn };

Scheme parse_scheme(std::string_view name);  // "ddpm" | "uniform" | "dnn"
std::string_view scheme_name(Scheme s);

// Flat key = value experiment description. Defaults reproduce the 16-QAM
// reference setup; every field can be overridden from file.
struct ExperimentConfig {
    int modulation_order = 16;
    int t_steps = 100;
    double beta_min = 1e-4;
    double beta_max = 0.02;

    int epochs = 1000;
    int batch_size = 256;
    int draws_per_point = 256;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int hidden_width = 128;

    int shaping_samples = 10000;
    double transmit_power = 1.0;

    std::vector<double> sweep_snr_db = {-25.0, -20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0};
    long long sweep_symbols = 100000;
    std::vector<NoiseKind> channels = {NoiseKind::awgn, NoiseKind::laplacian};
    std::vector<Scheme> schemes = {Scheme::ddpm, Scheme::uniform, Scheme::dnn};

    int demapper_iterations = 5000;
    int demapper_batch_size = 256;
    double demapper_learning_rate = 1e-3;
    int demapper_hidden_width = 64;

    std::uint64_t master_seed = 1;
    std::string out_dir = "results";
    int jobs = 0;  // worker threads for sweeps; 0 picks the hardware count

    void validate() const;  // throws ConfigError on inconsistent values
};

// `key = value` per line, `#` comments, blank lines ignored. Unknown keys and
// malformed values are ConfigErrors naming the line.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical serialization (sorted keys, round-trip number formatting); equal
// configs produce equal text regardless of the source file's layout.
std::string canonical_config_text(const ExperimentConfig& cfg);

// FNV-1a over the canonical text, as a fixed-width hex string.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace diffshape
