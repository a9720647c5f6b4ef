#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// End-to-end checks of the installed command-line surface: every invocation
// goes through std::system against the real binary.

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return DIFFSHAPE_CLI_PATH; }

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

struct Workspace {
    fs::path root;
    fs::path cfg;
    fs::path trained;  // out dir of the first training run

    fs::path dir(const char* name) const {
        fs::create_directories(root / name);
        return root / name;
    }
};

RunResult run_cli(const Workspace& ws, const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path out_file = ws.root / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err_file = ws.root / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;

    const std::string cmd = (env.empty() ? "" : env + " ") + std::string(cli_path()) + " " + args +
                            " >" + out_file.string() + " 2>" + err_file.string();
    const int status = std::system(cmd.c_str());

    RunResult r;
    r.code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

constexpr const char* kTinyConfig =
    "# four-point starter setup\n"
    "modulation_order = 4\n"
    "t_steps = 8\n"
    "beta_max = 0.05\n"
    "epochs = 2\n"
    "batch_size = 64\n"
    "draws_per_point = 16\n"
    "hidden_width = 16\n"
    "shaping_samples = 300\n"
    "sweep_snr_db = 0, 10\n"
    "sweep_symbols = 1500\n"
    "schemes = ddpm, dnn\n"
    "channels = awgn\n"
    "demapper_iterations = 120\n"
    "demapper_hidden_width = 16\n"
    "master_seed = 11\n"
    "jobs = 1\n";

// One shared workspace: the first access trains a small model through the CLI
// that later cases reuse.
const Workspace& ws() {
    static Workspace w = [] {
        Workspace init;
        init.root = fs::temp_directory_path() / "diffshape_cli_tests";
        fs::remove_all(init.root);
        fs::create_directories(init.root);
        init.cfg = init.root / "tiny.cfg";
        spit(init.cfg, kTinyConfig);
        init.trained = init.root / "trained";

        const RunResult r = run_cli(init, "train --config " + init.cfg.string() + " --out " +
                                              init.trained.string());
        REQUIRE(r.code == 0);
        REQUIRE(fs::exists(init.trained / "checkpoint.json"));
        REQUIRE(fs::exists(init.trained / "training_log.csv"));
        return init;
    }();
    return w;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
}

} // namespace

TEST_CASE("training is reproducible byte for byte") {
    const fs::path second = ws().dir("trained_again");
    const RunResult r =
        run_cli(ws(), "train --config " + ws().cfg.string() + " --out " + second.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("final loss") != std::string::npos);
    CHECK(slurp(second / "checkpoint.json") == slurp(ws().trained / "checkpoint.json"));
    CHECK(slurp(second / "training_log.csv") == slurp(ws().trained / "training_log.csv"));

    // A different seed produces a different model.
    const fs::path reseeded = ws().dir("trained_seed2");
    const RunResult r2 = run_cli(ws(), "train --config " + ws().cfg.string() + " --seed 2 --out " +
                                           reseeded.string());
    CHECK(r2.code == 0);
    CHECK(slurp(reseeded / "checkpoint.json") != slurp(ws().trained / "checkpoint.json"));
}

TEST_CASE("configuration problems exit with code 2") {
    const fs::path bad = ws().root / "bad.cfg";
    spit(bad, "modulation_order = 4\nwibble = 3\n");
    const RunResult unknown = run_cli(ws(), "train --config " + bad.string());
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("config error:") != std::string::npos);
    CHECK(unknown.err.find("line 2") != std::string::npos);

    const RunResult missing = run_cli(ws(), "train --config " + (ws().root / "nope.cfg").string());
    CHECK(missing.code == 2);

    const RunResult no_flag = run_cli(ws(), "train");
    CHECK(no_flag.code == 2);

    const RunResult help = run_cli(ws(), "--help");
    CHECK(help.code == 0);
}

TEST_CASE("runtime failures exit with code 3") {
    const RunResult no_model =
        run_cli(ws(), "shape --model " + (ws().root / "ghost.json").string() + " --snr-db 0");
    CHECK(no_model.code == 3);
    CHECK(no_model.err.find("error:") != std::string::npos);

    const fs::path bad_csv = ws().root / "bad_rows.csv";
    spit(bad_csv, "i,q\n0.5,0.5\n1,foo\n");
    const RunResult bad_input =
        run_cli(ws(), "reconstruct --model " + (ws().trained / "checkpoint.json").string() +
                          " --input " + bad_csv.string() + " --out " + ws().dir("rec_bad").string());
    CHECK(bad_input.code == 3);
    CHECK(bad_input.err.find("line 3") != std::string::npos);
}

TEST_CASE("shaping emits a normalized distribution table") {
    const fs::path out = ws().dir("shaped");
    const RunResult r =
        run_cli(ws(), "shape --model " + (ws().trained / "checkpoint.json").string() +
                          " --snr-db -25 --samples 400 --seed 5 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("entropy = ") != std::string::npos);

    const std::string csv = slurp(out / "distribution.csv");
    CHECK(csv.rfind("# config_hash=", 0) == 0);
    CHECK(csv.find(" seed=5\n") != std::string::npos);
    const auto lines = data_lines(csv);
    REQUIRE(lines.size() == 5);  // header + 4 symbols
    CHECK(lines[0] == "symbol_index,i,q,probability");
    double total = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto last_comma = lines[i].rfind(',');
        total += std::stod(lines[i].substr(last_comma + 1));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reconstruction modes agree and vote counts add up") {
    const fs::path iq = ws().root / "observed.csv";
    spit(iq, "i,q\n0.7,0.7\n-0.7,-0.7\n0.1,-0.4\n");
    const std::string model = (ws().trained / "checkpoint.json").string();

    const fs::path a = ws().dir("rec_default");
    const fs::path b = ws().dir("rec_pass1");
    REQUIRE(run_cli(ws(), "reconstruct --model " + model + " --input " + iq.string() +
                              " --seed 9 --out " + a.string())
                .code == 0);
    REQUIRE(run_cli(ws(), "reconstruct --model " + model + " --input " + iq.string() +
                              " --passes 1 --seed 9 --out " + b.string())
                .code == 0);
    const std::string single = slurp(a / "reconstructed.csv");
    CHECK(single == slurp(b / "reconstructed.csv"));
    const auto rec_lines = data_lines(single);
    REQUIRE(rec_lines.size() == 4);
    CHECK(rec_lines[0] == "i,q,symbol_index");
    CHECK(rec_lines[1].rfind("0.7,0.7,", 0) == 0);

    const fs::path c = ws().dir("rec_pass3");
    REQUIRE(run_cli(ws(), "reconstruct --model " + model + " --input " + iq.string() +
                              " --passes 3 --seed 9 --out " + c.string())
                .code == 0);
    const auto hist_lines = data_lines(slurp(c / "reconstructed.csv"));
    REQUIRE(hist_lines.size() >= 4);
    CHECK(hist_lines[0] == "i,q,symbol_index,count");
    long long votes = 0;
    for (std::size_t i = 1; i < hist_lines.size(); ++i) {
        const auto last_comma = hist_lines[i].rfind(',');
        votes += std::stoll(hist_lines[i].substr(last_comma + 1));
    }
    CHECK(votes == 9);  // 3 samples x 3 passes

    const RunResult zero = run_cli(ws(), "reconstruct --model " + model + " --input " + iq.string() +
                                             " --passes 0");
    CHECK(zero.code == 2);
}

TEST_CASE("output directory falls back to the environment") {
    const fs::path env_dir = ws().root / "env_out";
    const RunResult r =
        run_cli(ws(), "shape --model " + (ws().trained / "checkpoint.json").string() + " --snr-db 10",
                "DIFFSHAPE_OUT_DIR=" + env_dir.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(env_dir / "distribution.csv"));
}

TEST_CASE("single point simulation writes one row") {
    const fs::path out = ws().dir("sim");
    const RunResult r =
        run_cli(ws(), "simulate --model " + (ws().trained / "checkpoint.json").string() +
                          " --snr-db 0 --scheme uniform --symbols 800 --seed 3 --out " + out.string());
    REQUIRE(r.code == 0);
    const auto lines = data_lines(slurp(out / "simulate.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "scheme,channel,snr_db,mi_bits,ser,entropy_tx,seed");
    CHECK(lines[1].rfind("uniform,awgn,0,", 0) == 0);
}

TEST_CASE("sweeps reuse checkpoints and repeat exactly") {
    const std::string model = (ws().trained / "checkpoint.json").string();
    const fs::path s1 = ws().dir("sweep1");
    const fs::path s2 = ws().dir("sweep2");
    const std::string args = "sweep --config " + ws().cfg.string() + " --model " + model;

    const RunResult r1 = run_cli(ws(), args + " --out " + s1.string());
    REQUIRE(r1.code == 0);
    CHECK(r1.out.find("[4/4]") != std::string::npos);
    const RunResult r2 = run_cli(ws(), args + " --out " + s2.string());
    REQUIRE(r2.code == 0);

    const std::string csv = slurp(s1 / "sweep.csv");
    CHECK(csv == slurp(s2 / "sweep.csv"));
    const auto lines = data_lines(csv);
    REQUIRE(lines.size() == 5);  // header + 2 schemes x 1 channel x 2 snrs
    CHECK(lines[1].rfind("ddpm,awgn,0,", 0) == 0);
    CHECK(lines[4].rfind("dnn,awgn,10,", 0) == 0);

    const std::string svg = slurp(s1 / "sweep.svg");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find(">ddpm/awgn</text>") != std::string::npos);

    // A checkpoint that does not match the config is refused.
    const fs::path other_cfg = ws().root / "other.cfg";
    spit(other_cfg, std::string(kTinyConfig) + "t_steps = 6\n");
    const RunResult mismatch =
        run_cli(ws(), "sweep --config " + other_cfg.string() + " --model " + model);
    CHECK(mismatch.code == 3);
    CHECK(mismatch.err.find("does not match") != std::string::npos);
}
