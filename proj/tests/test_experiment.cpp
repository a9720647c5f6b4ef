#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffshape/checkpoint.hpp"
#include "diffshape/experiment.hpp"

using namespace diffshape;

namespace {

// Small enough to train and sweep in well under a second.
ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.modulation_order = 4;
    cfg.t_steps = 8;
    cfg.beta_max = 0.05;
    cfg.epochs = 2;
    cfg.batch_size = 64;
    cfg.draws_per_point = 16;
    cfg.hidden_width = 16;
    cfg.shaping_samples = 300;
    cfg.sweep_snr_db = {0.0, 10.0};
    cfg.sweep_symbols = 1500;
    cfg.schemes = {Scheme::dnn, Scheme::ddpm};  // deliberately unsorted
    cfg.demapper_iterations = 120;
    cfg.demapper_hidden_width = 16;
    cfg.master_seed = 11;
    cfg.jobs = 1;
    return cfg;
}

const TrainedModel& tiny_model() {
    static TrainedModel m = train_from_config(tiny_config());
    return m;
}

bool same_row(const SweepRow& a, const SweepRow& b) {
    return a.scheme == b.scheme && a.channel == b.channel && a.snr_db == b.snr_db &&
           a.mi_bits == b.mi_bits && a.ser == b.ser && a.entropy_tx == b.entropy_tx &&
           a.seed == b.seed;
}

} // namespace

TEST_CASE("training from a config packages provenance") {
    const ExperimentConfig cfg = tiny_config();
    const TrainedModel& m = tiny_model();

    CHECK(m.checkpoint.modulation_order == 4);
    CHECK(m.checkpoint.schedule.t_steps() == cfg.t_steps);
    CHECK(m.checkpoint.schedule.beta(1) == cfg.beta_min);
    CHECK(m.checkpoint.params.time_embed.rows() == cfg.t_steps);
    CHECK(m.checkpoint.params.time_embed.cols() == cfg.hidden_width);
    CHECK(static_cast<int>(m.losses.size()) == cfg.epochs);  // one step per epoch here
    CHECK(m.checkpoint.meta.at("config_hash").get<std::string>() == config_hash(cfg));
    CHECK(m.checkpoint.meta.at("seed").get<std::uint64_t>() == cfg.master_seed);
    CHECK(m.checkpoint.meta.at("config").get<std::string>() == canonical_config_text(cfg));

    // Bit-for-bit reproducible: a second training serializes identically.
    const TrainedModel again = train_from_config(cfg);
    CHECK(serialize_checkpoint(again.checkpoint) == serialize_checkpoint(m.checkpoint));
    CHECK(again.losses == m.losses);
}

TEST_CASE("single point evaluation is deterministic and sane") {
    const ExperimentConfig cfg = tiny_config();
    const TrainedModel& m = tiny_model();
    const Constellation c = make_qam(cfg.modulation_order);

    const SweepRow row = evaluate_point(cfg, m.checkpoint.params, m.checkpoint.schedule, c,
                                        Scheme::ddpm, NoiseKind::awgn, 10.0, nullptr);
    CHECK(row.scheme == Scheme::ddpm);
    CHECK(row.channel == NoiseKind::awgn);
    CHECK(row.snr_db == 10.0);
    CHECK(row.seed == cfg.master_seed);
    CHECK(row.mi_bits >= 0.0);
    CHECK(row.mi_bits <= 2.0 + 1e-12);
    CHECK(row.ser >= 0.0);
    CHECK(row.ser <= 1.0);
    CHECK(row.entropy_tx >= 0.0);
    CHECK(row.entropy_tx <= 2.0 + 1e-12);

    const SweepRow rerun = evaluate_point(cfg, m.checkpoint.params, m.checkpoint.schedule, c,
                                          Scheme::ddpm, NoiseKind::awgn, 10.0, nullptr);
    CHECK(same_row(row, rerun));

    // Switching the channel kind keeps the transmit side identical; only the
    // added noise differs.
    const SweepRow ood = evaluate_point(cfg, m.checkpoint.params, m.checkpoint.schedule, c,
                                        Scheme::ddpm, NoiseKind::laplacian, 10.0, nullptr);
    CHECK(ood.entropy_tx == row.entropy_tx);

    CHECK_THROWS_AS(evaluate_point(cfg, m.checkpoint.params, m.checkpoint.schedule, c, Scheme::dnn,
                                   NoiseKind::awgn, 10.0, nullptr),
                    std::invalid_argument);
}

TEST_CASE("uniform scheme transmits a flat distribution") {
    const ExperimentConfig cfg = tiny_config();
    const TrainedModel& m = tiny_model();
    const Constellation c = make_qam(cfg.modulation_order);

    const SweepRow row = evaluate_point(cfg, m.checkpoint.params, m.checkpoint.schedule, c,
                                        Scheme::uniform, NoiseKind::awgn, 0.0, nullptr);
    // 1500 uniform draws over 4 symbols sit close to the 2-bit maximum.
    CHECK(row.entropy_tx > 1.99);
}

TEST_CASE("demappers are trained per sweep snr") {
    const ExperimentConfig cfg = tiny_config();
    const Constellation c = make_qam(cfg.modulation_order);
    const auto demappers = train_demappers(cfg, c);
    REQUIRE(demappers.size() == 2);
    CHECK(demappers.count(0.0) == 1);
    CHECK(demappers.count(10.0) == 1);
    CHECK(demappers.at(0.0).layers[0].w.cols() == cfg.demapper_hidden_width);
    // Different snrs get different training streams, hence different weights.
    const double gap =
        (demappers.at(0.0).layers[0].w - demappers.at(10.0).layers[0].w).cwiseAbs().maxCoeff();
    CHECK(gap > 0.0);
}

TEST_CASE("sweep covers the grid in sorted order, independent of worker count") {
    const ExperimentConfig cfg = tiny_config();
    const TrainedModel& m = tiny_model();
    const Constellation c = make_qam(cfg.modulation_order);

    std::vector<SweepRow> seen;
    const std::vector<SweepRow> rows = run_sweep(cfg, m.checkpoint.params, m.checkpoint.schedule, c,
                                                 [&](const SweepRow& r) { seen.push_back(r); });
    REQUIRE(rows.size() == 8);  // 2 schemes x 2 channels x 2 snrs
    REQUIRE(seen.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(same_row(rows[i], seen[i]));

    auto key = [](const SweepRow& r) {
        return std::make_tuple(std::string(scheme_name(r.scheme)),
                               std::string(noise_kind_name(r.channel)), r.snr_db);
    };
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(key(rows[i - 1]) < key(rows[i]));
    CHECK(rows.front().scheme == Scheme::ddpm);
    CHECK(rows.back().scheme == Scheme::dnn);

    ExperimentConfig parallel = cfg;
    parallel.jobs = 3;
    const std::vector<SweepRow> rows3 =
        run_sweep(parallel, m.checkpoint.params, m.checkpoint.schedule, c);
    REQUIRE(rows3.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(same_row(rows[i], rows3[i]));
}

TEST_CASE("sweep table layout") {
    SweepRow a;
    a.scheme = Scheme::ddpm;
    a.channel = NoiseKind::awgn;
    a.snr_db = -5.0;
    a.mi_bits = 1.5;
    a.ser = 0.25;
    a.entropy_tx = 2.0;
    a.seed = 7;
    SweepRow b;
    b.scheme = Scheme::dnn;
    b.channel = NoiseKind::laplacian;
    b.snr_db = 10.0;
    b.mi_bits = 0.125;
    b.ser = 1.0;
    b.entropy_tx = 3.9890000000000003;
    b.seed = 7;

    CHECK(sweep_csv_text({a, b}, "# head") ==
          "# head\n"
          "scheme,channel,snr_db,mi_bits,ser,entropy_tx,seed\n"
          "ddpm,awgn,-5,1.5,0.25,2,7\n"
          "dnn,laplacian,10,0.125,1,3.9890000000000003,7\n");
}

TEST_CASE("sweep chart draws one series per scheme and channel") {
    std::vector<SweepRow> rows;
    for (double snr : {10.0, 0.0, -10.0}) {  // deliberately unsorted
        for (NoiseKind k : {NoiseKind::awgn, NoiseKind::laplacian}) {
            SweepRow r;
            r.scheme = Scheme::ddpm;
            r.channel = k;
            r.snr_db = snr;
            r.mi_bits = (snr + 30.0) / 10.0;
            rows.push_back(r);
        }
    }
    const std::string svg = sweep_chart_svg(rows, "sweep");
    int polylines = 0;
    for (auto pos = svg.find("<polyline "); pos != std::string::npos;
         pos = svg.find("<polyline ", pos + 1)) {
        ++polylines;
    }
    CHECK(polylines == 2);
    CHECK(svg.find(">ddpm/awgn</text>") != std::string::npos);
    CHECK(svg.find(">ddpm/laplacian</text>") != std::string::npos);
}
