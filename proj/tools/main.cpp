#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>

#include "CLI11.hpp"

#include "diffshape/channel.hpp"
#include "diffshape/checkpoint.hpp"
#include "diffshape/config.hpp"
#include "diffshape/csv.hpp"
#include "diffshape/experiment.hpp"
#include "diffshape/format.hpp"
#include "diffshape/metrics.hpp"
#include "diffshape/receiver.hpp"
#include "diffshape/shaping.hpp"

namespace {

using namespace diffshape;

// --out beats the environment, which beats the config (or built-in) default.
std::string resolve_out_dir(const std::string& flag_value, const std::string& fallback) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("DIFFSHAPE_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return fallback;
}

std::string ensure_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

std::string model_hash(const Checkpoint& ck) {
    if (ck.meta.is_object() && ck.meta.contains("config_hash") &&
        ck.meta["config_hash"].is_string()) {
        return ck.meta["config_hash"].get<std::string>();
    }
    return "none";
}

double tail_mean(const std::vector<double>& v, std::size_t n) {
    if (v.empty()) return 0.0;
    const std::size_t count = std::min(n, v.size());
    return std::accumulate(v.end() - static_cast<std::ptrdiff_t>(count), v.end(), 0.0) /
           static_cast<double>(count);
}

struct CommonFlags {
    std::string config_path;
    std::string model_path;
    std::string out_dir;
    double snr_db = 0.0;
    std::string channel = "awgn";
    std::string scheme = "ddpm";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int samples = 10000;
    long long symbols = 100000;
    std::string input_path;
    int passes = 1;
};

int cmd_train(const CommonFlags& f) {
    ExperimentConfig cfg = load_config_file(f.config_path);
    if (f.seed_set) cfg.master_seed = f.seed;

    std::cout << "training order-" << cfg.modulation_order << " model: " << cfg.epochs
              << " epochs, T=" << cfg.t_steps << ", seed " << cfg.master_seed << "\n";
    const TrainedModel trained = train_from_config(cfg);

    const std::string dir = ensure_dir(resolve_out_dir(f.out_dir, cfg.out_dir));
    const std::string ck_path = dir + "/checkpoint.json";
    const std::string log_path = dir + "/training_log.csv";
    save_checkpoint_file(trained.checkpoint, ck_path);
    write_text_file(log_path, training_log_csv(trained.losses,
                                               provenance_comment(config_hash(cfg), cfg.master_seed)));

    std::cout << "final loss (mean of last 100 steps): " << format_double(tail_mean(trained.losses, 100))
              << "\nwrote " << ck_path << "\nwrote " << log_path << "\n";
    return 0;
}

int cmd_shape(const CommonFlags& f) {
    const Checkpoint ck = load_checkpoint_file(f.model_path);
    const Constellation c = make_qam(ck.modulation_order);

    ShapingRequest req;
    req.snr_db = f.snr_db;
    req.n_samples = f.samples;
    req.seed = f.seed;
    const ShapingDistribution dist = shape(ck.params, ck.schedule, c, req);

    const std::string dir = ensure_dir(resolve_out_dir(f.out_dir, "results"));
    const std::string path = dir + "/distribution.csv";
    write_text_file(path, distribution_csv(c, dist, provenance_comment(model_hash(ck), f.seed)));

    std::cout << "entropy = " << format_double(entropy_bits(dist)) << " bits over "
              << ck.modulation_order << " symbols at " << format_double(f.snr_db) << " dB\nwrote "
              << path << "\n";
    return 0;
}

int cmd_simulate(const CommonFlags& f) {
    ExperimentConfig cfg =
        f.config_path.empty() ? ExperimentConfig{} : load_config_file(f.config_path);
    const Checkpoint ck = load_checkpoint_file(f.model_path);
    cfg.modulation_order = ck.modulation_order;
    cfg.t_steps = ck.schedule.t_steps();
    cfg.sweep_symbols = f.symbols;
    if (f.seed_set) cfg.master_seed = f.seed;
    cfg.validate();

    const Constellation c = make_qam(ck.modulation_order);
    const Scheme scheme = parse_scheme(f.scheme);
    const NoiseKind kind = parse_noise_kind(f.channel);

    DemapperParams demapper;
    const DemapperParams* demapper_ptr = nullptr;
    if (scheme == Scheme::dnn) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.sweep_snr_db = {f.snr_db};
        demapper = train_demappers(point_cfg, c).at(f.snr_db);
        demapper_ptr = &demapper;
    }

    const SweepRow row =
        evaluate_point(cfg, ck.params, ck.schedule, c, scheme, kind, f.snr_db, demapper_ptr);

    const std::string dir = ensure_dir(resolve_out_dir(f.out_dir, cfg.out_dir));
    const std::string path = dir + "/simulate.csv";
    write_text_file(path, sweep_csv_text({row}, provenance_comment(config_hash(cfg), cfg.master_seed)));

    std::cout << scheme_name(row.scheme) << "/" << noise_kind_name(row.channel) << " @ "
              << format_double(row.snr_db) << " dB: mi=" << format_double(row.mi_bits)
              << " bits, ser=" << format_double(row.ser)
              << ", entropy_tx=" << format_double(row.entropy_tx) << " bits\nwrote " << path << "\n";
    return 0;
}

int cmd_sweep(const CommonFlags& f) {
    ExperimentConfig cfg = load_config_file(f.config_path);
    if (f.seed_set) cfg.master_seed = f.seed;

    const std::string dir = ensure_dir(resolve_out_dir(f.out_dir, cfg.out_dir));
    const std::string comment = provenance_comment(config_hash(cfg), cfg.master_seed);

    Constellation c = make_qam(cfg.modulation_order);
    Checkpoint ck = [&] {
        if (!f.model_path.empty()) {
            Checkpoint loaded = load_checkpoint_file(f.model_path);
            if (loaded.modulation_order != cfg.modulation_order ||
                loaded.schedule.t_steps() != cfg.t_steps) {
                throw std::runtime_error("sweep: model '" + f.model_path +
                                         "' does not match the config's order/t_steps");
            }
            return loaded;
        }
        std::cout << "no --model given; training first (" << cfg.epochs << " epochs)\n";
        TrainedModel trained = train_from_config(cfg);
        save_checkpoint_file(trained.checkpoint, dir + "/checkpoint.json");
        write_text_file(dir + "/training_log.csv", training_log_csv(trained.losses, comment));
        return std::move(trained.checkpoint);
    }();

    const std::size_t total =
        cfg.schemes.size() * cfg.channels.size() * cfg.sweep_snr_db.size();
    std::size_t done = 0;
    const auto on_row = [&](const SweepRow& row) {
        ++done;
        std::cout << "[" << done << "/" << total << "] " << scheme_name(row.scheme) << "/"
                  << noise_kind_name(row.channel) << " @ " << format_double(row.snr_db)
                  << " dB: mi=" << format_double(row.mi_bits) << " bits\n";
    };
    const std::vector<SweepRow> rows = run_sweep(cfg, ck.params, ck.schedule, c, on_row);

    const std::string csv_path = dir + "/sweep.csv";
    const std::string svg_path = dir + "/sweep.svg";
    write_text_file(csv_path, sweep_csv_text(rows, comment));
    write_text_file(svg_path,
                    sweep_chart_svg(rows, "Mutual information vs SNR, order " +
                                              std::to_string(cfg.modulation_order)));
    std::cout << "wrote " << csv_path << "\nwrote " << svg_path << "\n";
    return 0;
}

int cmd_reconstruct(const CommonFlags& f) {
    const Checkpoint ck = load_checkpoint_file(f.model_path);
    const Constellation c = make_qam(ck.modulation_order);
    const SymbolBatch y = read_iq_csv(f.input_path);
    const RngStream stream = RngStream::root(f.seed).child("receiver");

    const std::string dir = ensure_dir(resolve_out_dir(f.out_dir, "results"));
    const std::string path = dir + "/reconstructed.csv";
    const std::string comment = provenance_comment(model_hash(ck), f.seed);

    if (f.passes == 1) {
        const Projection rec = reconstruct(ck.params, ck.schedule, c, y, stream);
        write_text_file(path, reconstruction_csv(y, rec.indices, comment));
    } else {
        const Eigen::MatrixXi hist = decision_histogram(ck.params, ck.schedule, c, y, f.passes, stream);
        write_text_file(path, histogram_csv(y, hist, comment));
    }
    std::cout << "reconstructed " << y.rows() << " samples (" << f.passes << " pass"
              << (f.passes == 1 ? "" : "es") << ")\nwrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DDPM-based probabilistic constellation shaping toolkit"};
    app.require_subcommand(1);

    CommonFlags f;

    CLI::App* train = app.add_subcommand("train", "train a denoiser from a config file");
    train->add_option("--config", f.config_path, "experiment config file")->required();
    train->add_option("--out", f.out_dir, "output directory");
    train->add_option("--seed", f.seed, "override the config's master seed")
        ->each([&f](const std::string&) { f.seed_set = true; });

    CLI::App* shape_cmd = app.add_subcommand("shape", "emit the shaped distribution for an SNR");
    shape_cmd->add_option("--model", f.model_path, "checkpoint file")->required();
    shape_cmd->add_option("--snr-db", f.snr_db, "channel SNR in dB")->required();
    shape_cmd->add_option("--samples", f.samples, "observations used for the histogram");
    shape_cmd->add_option("--seed", f.seed, "shaping seed");
    shape_cmd->add_option("--out", f.out_dir, "output directory");

    CLI::App* simulate = app.add_subcommand("simulate", "evaluate one (scheme, channel, SNR) point");
    simulate->add_option("--model", f.model_path, "checkpoint file")->required();
    simulate->add_option("--snr-db", f.snr_db, "channel SNR in dB")->required();
    simulate->add_option("--channel", f.channel, "awgn or laplacian");
    simulate->add_option("--scheme", f.scheme, "ddpm, uniform or dnn");
    simulate->add_option("--symbols", f.symbols, "symbols to simulate");
    simulate->add_option("--config", f.config_path, "optional config for baseline settings");
    simulate->add_option("--seed", f.seed, "master seed")
        ->each([&f](const std::string&) { f.seed_set = true; });
    simulate->add_option("--out", f.out_dir, "output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "full MI-vs-SNR sweep with CSV and SVG output");
    sweep->add_option("--config", f.config_path, "experiment config file")->required();
    sweep->add_option("--model", f.model_path, "reuse an existing checkpoint");
    sweep->add_option("--seed", f.seed, "override the config's master seed")
        ->each([&f](const std::string&) { f.seed_set = true; });
    sweep->add_option("--out", f.out_dir, "output directory");

    CLI::App* reconstruct_cmd =
        app.add_subcommand("reconstruct", "decode received i,q samples to symbol indices");
    reconstruct_cmd->add_option("--model", f.model_path, "checkpoint file")->required();
    reconstruct_cmd->add_option("--input", f.input_path, "CSV of received i,q rows")->required();
    reconstruct_cmd->add_option("--passes", f.passes, "stochastic passes (>1 emits vote counts)")
        ->check(CLI::PositiveNumber);
    reconstruct_cmd->add_option("--seed", f.seed, "receiver seed");
    reconstruct_cmd->add_option("--out", f.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are config errors; --help is success
    }

    try {
        if (train->parsed()) return cmd_train(f);
        if (shape_cmd->parsed()) return cmd_shape(f);
        if (simulate->parsed()) return cmd_simulate(f);
        if (sweep->parsed()) return cmd_sweep(f);
        if (reconstruct_cmd->parsed()) return cmd_reconstruct(f);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
