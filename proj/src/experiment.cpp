#include "diffshape/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "diffshape/channel.hpp"
#include "diffshape/format.hpp"
#include "diffshape/metrics.hpp"
#include "diffshape/receiver.hpp"
#include "diffshape/rng.hpp"
#include "diffshape/shaping.hpp"
#include "diffshape/svg.hpp"

namespace diffshape {
namespace {

std::uint64_t snr_key(double snr_db) { return std::bit_cast<std::uint64_t>(snr_db); }

}  // namespace

SweepRow evaluate_point(const ExperimentConfig& cfg, const DenoiserParams& model,
                        const VarianceSchedule& sched, const Constellation& c, Scheme scheme,
                        NoiseKind channel, double snr_db, const DemapperParams* demapper) {
    if (cfg.sweep_symbols > 100000000) {
        throw std::invalid_argument("evaluate_point: sweep_symbols too large");
    }
    const int n = static_cast<int>(cfg.sweep_symbols);
    const RngStream base = RngStream::root(cfg.master_seed)
                               .child("sweep")
                               .child(scheme_name(scheme))
                               .child(snr_key(snr_db));
    const ChannelSpec spec{channel, snr_db, cfg.transmit_power};

    // The transmit distribution is the only scheme-dependent part of the
    // transmitter; symbol draws and channel noise use streams shared across
    // channel kinds so in-distribution and OOD rows differ only by the noise.
    ShapingDistribution dist;
    if (scheme == Scheme::ddpm) {
        ShapingRequest req;
        req.snr_db = snr_db;
        req.n_samples = cfg.shaping_samples;
        req.transmit_power = cfg.transmit_power;
        req.seed = base.child("shape").state;
        dist = shape(model, sched, c, req);
    } else {
        dist = uniform_shaping(c);
    }

    auto symbol_rng = base.child("symbols").engine();
    const DrawnSymbols tx = sample_symbols(dist, c, n, symbol_rng);

    auto channel_rng = base.child("channel").engine();
    const SymbolBatch y = transmit(tx.points, spec, channel_rng);

    std::vector<int> rx_idx;
    switch (scheme) {
        case Scheme::ddpm:
        case Scheme::uniform:
            rx_idx = reconstruct(model, sched, c, y, base.child("receiver")).indices;
            break;
        case Scheme::dnn: {
            if (demapper == nullptr) {
                throw std::invalid_argument("evaluate_point: dnn scheme requires a demapper");
            }
            rx_idx = demap(*demapper, y);
            break;
        }
    }
    const std::vector<int>& tx_idx = tx.indices;

    SweepRow row;
    row.scheme = scheme;
    row.channel = channel;
    row.snr_db = snr_db;
    row.mi_bits = mutual_information_bits(tx_idx, rx_idx, c.order);
    row.ser = symbol_error_rate(tx_idx, rx_idx);
    row.entropy_tx = entropy_bits(to_distribution(count_occurrences(tx_idx, c)));
    row.seed = cfg.master_seed;
    return row;
}

std::map<double, DemapperParams> train_demappers(const ExperimentConfig& cfg,
                                                 const Constellation& c) {
    std::map<double, DemapperParams> out;
    for (double snr : cfg.sweep_snr_db) {
        if (out.count(snr)) continue;
        DemapperConfig dc;
        dc.iterations = cfg.demapper_iterations;
        dc.batch_size = cfg.demapper_batch_size;
        dc.learning_rate = cfg.demapper_learning_rate;
        dc.hidden_width = cfg.demapper_hidden_width;
        dc.seed = RngStream::root(cfg.master_seed).child("demapper").child(snr_key(snr)).state;
        const ChannelSpec train_spec{NoiseKind::awgn, snr, cfg.transmit_power};
        out.emplace(snr, train_demapper(c, train_spec, dc).params);
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const DenoiserParams& model,
                                const VarianceSchedule& sched, const Constellation& c,
                                const std::function<void(const SweepRow&)>& on_row) {
    struct Point {
        Scheme scheme;
        NoiseKind channel;
        double snr_db;
    };
    std::vector<Point> points;
    for (Scheme s : cfg.schemes) {
        for (NoiseKind k : cfg.channels) {
            for (double snr : cfg.sweep_snr_db) points.push_back({s, k, snr});
        }
    }
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        const auto ka = std::make_tuple(scheme_name(a.scheme), noise_kind_name(a.channel), a.snr_db);
        const auto kb = std::make_tuple(scheme_name(b.scheme), noise_kind_name(b.channel), b.snr_db);
        return ka < kb;
    });

    const bool needs_demappers =
        std::any_of(cfg.schemes.begin(), cfg.schemes.end(), [](Scheme s) { return s == Scheme::dnn; });
    const std::map<double, DemapperParams> demappers =
        needs_demappers ? train_demappers(cfg, c) : std::map<double, DemapperParams>{};

    std::size_t jobs = cfg.jobs > 0 ? static_cast<std::size_t>(cfg.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, points.size());

    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    std::mutex sink_mutex;
    std::exception_ptr failure;

    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            const Point& pt = points[i];
            try {
                const DemapperParams* dm =
                    pt.scheme == Scheme::dnn ? &demappers.at(pt.snr_db) : nullptr;
                rows[i] = evaluate_point(cfg, model, sched, c, pt.scheme, pt.channel, pt.snr_db, dm);
                if (on_row) {
                    const std::lock_guard<std::mutex> lock(sink_mutex);
                    on_row(rows[i]);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(sink_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (std::size_t i = 0; i < jobs; ++i) workers.emplace_back(work);
        for (auto& w : workers) w.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string sweep_csv_text(const std::vector<SweepRow>& rows, const std::string& comment) {
    std::string out = comment + "\nscheme,channel,snr_db,mi_bits,ser,entropy_tx,seed\n";
    for (const SweepRow& r : rows) {
        out += std::string(scheme_name(r.scheme));
        out += ',';
        out += std::string(noise_kind_name(r.channel));
        out += ',';
        out += format_double(r.snr_db);
        out += ',';
        out += format_double(r.mi_bits);
        out += ',';
        out += format_double(r.ser);
        out += ',';
        out += format_double(r.entropy_tx);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

std::string sweep_chart_svg(const std::vector<SweepRow>& rows, const std::string& title) {
    std::vector<SvgSeries> series;
    for (const SweepRow& r : rows) {
        const std::string label =
            std::string(scheme_name(r.scheme)) + "/" + std::string(noise_kind_name(r.channel));
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const SvgSeries& s) { return s.label == label; });
        if (it == series.end()) {
            series.push_back(SvgSeries{label, {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(r.snr_db, r.mi_bits);
    }
    for (auto& s : series) std::sort(s.points.begin(), s.points.end());
    return render_line_chart(series, title, "SNR (dB)", "mutual information (bits)");
}

TrainedModel train_from_config(const ExperimentConfig& cfg) {
    cfg.validate();
    const Constellation c = make_qam(cfg.modulation_order);
    const VarianceSchedule sched = VarianceSchedule::linear(cfg.t_steps, cfg.beta_min, cfg.beta_max);

    TrainConfig tc;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.draws_per_point = cfg.draws_per_point;
    tc.learning_rate = cfg.learning_rate;
    tc.adam_beta1 = cfg.adam_beta1;
    tc.adam_beta2 = cfg.adam_beta2;
    tc.adam_eps = cfg.adam_eps;
    tc.hidden_width = cfg.hidden_width;
    tc.seed = cfg.master_seed;

    TrainResult tr = train_denoiser(c, sched, tc);

    nlohmann::json meta;
    meta["config_hash"] = config_hash(cfg);
    meta["seed"] = cfg.master_seed;
    meta["config"] = canonical_config_text(cfg);

    return TrainedModel{Checkpoint{std::move(tr.params), sched, cfg.modulation_order, std::move(meta)},
                        std::move(tr.losses)};
}

}  // namespace diffshape
