#include "diffshape/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "diffshape/format.hpp"
#include "diffshape/rng.hpp"

namespace diffshape {
namespace {

std::string trim(std::string_view s) {
    const char* ws = " \t\r";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) parts.push_back(trim(item));
    return parts;
}

template <class T>
T parse_number(const std::string& value, int line_no) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ConfigError("config line " + std::to_string(line_no) + ": cannot parse number '" +
                          value + "'");
    }
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i];
    }
    return out;
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
    if (name == "ddpm") return Scheme::ddpm;
    if (name == "uniform") return Scheme::uniform;
    if (name == "dnn") return Scheme::dnn;
    throw ConfigError("unknown scheme '" + std::string(name) + "' (expected ddpm, uniform or dnn)");
}

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ddpm: return "ddpm";
        case Scheme::uniform: return "uniform";
        case Scheme::dnn: return "dnn";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };

    if (modulation_order != 4 && modulation_order != 16 && modulation_order != 64 &&
        modulation_order != 256) {
        fail("modulation_order must be 4, 16, 64 or 256");
    }
    if (t_steps < 1) fail("t_steps must be >= 1");
    if (!(beta_min > 0.0) || !(beta_max < 1.0)) fail("betas must lie in (0, 1)");
    if (t_steps > 1 && !(beta_min < beta_max)) fail("beta_min must be < beta_max");

    if (epochs < 1) fail("epochs must be >= 1");
    if (batch_size < 1) fail("batch_size must be >= 1");
    if (draws_per_point < 1) fail("draws_per_point must be >= 1");
    if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) fail("adam_beta1 must lie in [0, 1)");
    if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) fail("adam_beta2 must lie in [0, 1)");
    if (!(adam_eps > 0.0)) fail("adam_eps must be > 0");
    if (hidden_width < 1) fail("hidden_width must be >= 1");

    if (shaping_samples < 1) fail("shaping_samples must be >= 1");
    if (!(transmit_power > 0.0)) fail("transmit_power must be > 0");

    if (sweep_snr_db.empty()) fail("sweep_snr_db must list at least one SNR");
    if (sweep_symbols < 1) fail("sweep_symbols must be >= 1");
    if (channels.empty()) fail("channels must list at least one kind");
    if (schemes.empty()) fail("schemes must list at least one scheme");
    for (std::size_t i = 0; i < channels.size(); ++i) {
        for (std::size_t j = i + 1; j < channels.size(); ++j) {
            if (channels[i] == channels[j]) fail("duplicate channel kind");
        }
    }
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        for (std::size_t j = i + 1; j < schemes.size(); ++j) {
            if (schemes[i] == schemes[j]) fail("duplicate scheme");
        }
    }

    if (demapper_iterations < 1) fail("demapper_iterations must be >= 1");
    if (demapper_batch_size < 1) fail("demapper_batch_size must be >= 1");
    if (!(demapper_learning_rate > 0.0)) fail("demapper_learning_rate must be > 0");
    if (demapper_hidden_width < 1) fail("demapper_hidden_width must be >= 1");

    if (jobs < 0) fail("jobs must be >= 0");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }

        try {
            if (key == "modulation_order") cfg.modulation_order = parse_number<int>(value, line_no);
            else if (key == "t_steps") cfg.t_steps = parse_number<int>(value, line_no);
            else if (key == "beta_min") cfg.beta_min = parse_number<double>(value, line_no);
            else if (key == "beta_max") cfg.beta_max = parse_number<double>(value, line_no);
            else if (key == "epochs") cfg.epochs = parse_number<int>(value, line_no);
            else if (key == "batch_size") cfg.batch_size = parse_number<int>(value, line_no);
            else if (key == "draws_per_point") cfg.draws_per_point = parse_number<int>(value, line_no);
            else if (key == "learning_rate") cfg.learning_rate = parse_number<double>(value, line_no);
            else if (key == "adam_beta1") cfg.adam_beta1 = parse_number<double>(value, line_no);
            else if (key == "adam_beta2") cfg.adam_beta2 = parse_number<double>(value, line_no);
            else if (key == "adam_eps") cfg.adam_eps = parse_number<double>(value, line_no);
            else if (key == "hidden_width") cfg.hidden_width = parse_number<int>(value, line_no);
            else if (key == "shaping_samples") cfg.shaping_samples = parse_number<int>(value, line_no);
            else if (key == "transmit_power") cfg.transmit_power = parse_number<double>(value, line_no);
            else if (key == "sweep_snr_db") {
                cfg.sweep_snr_db.clear();
                for (const auto& item : split_list(value)) {
                    cfg.sweep_snr_db.push_back(parse_number<double>(item, line_no));
                }
            } else if (key == "sweep_symbols") {
                cfg.sweep_symbols = parse_number<long long>(value, line_no);
            } else if (key == "channels") {
                cfg.channels.clear();
                for (const auto& item : split_list(value)) {
                    cfg.channels.push_back(parse_noise_kind(item));
                }
            } else if (key == "schemes") {
                cfg.schemes.clear();
                for (const auto& item : split_list(value)) {
                    cfg.schemes.push_back(parse_scheme(item));
                }
            } else if (key == "demapper_iterations") {
                cfg.demapper_iterations = parse_number<int>(value, line_no);
            } else if (key == "demapper_batch_size") {
                cfg.demapper_batch_size = parse_number<int>(value, line_no);
            } else if (key == "demapper_learning_rate") {
                cfg.demapper_learning_rate = parse_number<double>(value, line_no);
            } else if (key == "demapper_hidden_width") {
                cfg.demapper_hidden_width = parse_number<int>(value, line_no);
            } else if (key == "master_seed") {
                cfg.master_seed = parse_number<std::uint64_t>(value, line_no);
            } else if (key == "out_dir") {
                if (value.empty()) throw ConfigError("config line " + std::to_string(line_no) +
                                                     ": out_dir must not be empty");
                cfg.out_dir = value;
            } else if (key == "jobs") {
                cfg.jobs = parse_number<int>(value, line_no);
            } else {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "'");
            }
        } catch (const std::invalid_argument& e) {
            // Channel/scheme name errors surface with the line number attached.
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
    // Only result-affecting fields: out_dir and jobs change where and how fast
    // results appear, never what they contain.
    std::vector<std::string> channel_names;
    for (NoiseKind k : cfg.channels) channel_names.emplace_back(noise_kind_name(k));
    std::vector<std::string> scheme_names;
    for (Scheme s : cfg.schemes) scheme_names.emplace_back(scheme_name(s));
    std::vector<std::string> snrs;
    for (double v : cfg.sweep_snr_db) snrs.push_back(format_double(v));

    std::ostringstream out;
    out << "adam_beta1 = " << format_double(cfg.adam_beta1) << "\n";
    out << "adam_beta2 = " << format_double(cfg.adam_beta2) << "\n";
    out << "adam_eps = " << format_double(cfg.adam_eps) << "\n";
    out << "batch_size = " << cfg.batch_size << "\n";
    out << "beta_max = " << format_double(cfg.beta_max) << "\n";
    out << "beta_min = " << format_double(cfg.beta_min) << "\n";
    out << "channels = " << join(channel_names) << "\n";
    out << "demapper_batch_size = " << cfg.demapper_batch_size << "\n";
    out << "demapper_hidden_width = " << cfg.demapper_hidden_width << "\n";
    out << "demapper_iterations = " << cfg.demapper_iterations << "\n";
    out << "demapper_learning_rate = " << format_double(cfg.demapper_learning_rate) << "\n";
    out << "draws_per_point = " << cfg.draws_per_point << "\n";
    out << "epochs = " << cfg.epochs << "\n";
    out << "hidden_width = " << cfg.hidden_width << "\n";
    out << "learning_rate = " << format_double(cfg.learning_rate) << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "modulation_order = " << cfg.modulation_order << "\n";
    out << "schemes = " << join(scheme_names) << "\n";
    out << "shaping_samples = " << cfg.shaping_samples << "\n";
    out << "sweep_snr_db = " << join(snrs) << "\n";
    out << "sweep_symbols = " << cfg.sweep_symbols << "\n";
    out << "t_steps = " << cfg.t_steps << "\n";
    out << "transmit_power = " << format_double(cfg.transmit_power) << "\n";
    return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::uint64_t h = fnv1a_hash(canonical_config_text(cfg));
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) {
        buf[15 - i] = digits[(h >> (4 * i)) & 0xF];
    }
    buf[16] = '\0';
    return std::string(buf);
}

}  // namespace diffshape
