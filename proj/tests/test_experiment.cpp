#include "doctest.h"

#include "motion/experiment.hpp"
#include "motion/io.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace motion;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per call.
fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("motiondet_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int cli(const std::string &args) {
    const std::string cmd = std::string(MOTIONDET_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path &p, const std::string &text) { std::ofstream(p, std::ios::binary) << text; }

RunConfig small_sweep() {
    RunConfig cfg = default_config();
    cfg.sweep.frequencies = log_spaced(0.1, 4.0, 8);
    return cfg;
}

} // namespace

TEST_CASE("topology export") {
    const fs::path dir = scratch("topo");
    REQUIRE(cli("topo -o " + dir.string()) == 0);
    const json t = json::parse(slurp(dir / "topology.json"));
    CHECK(t["counts"]["input"] == 75);
    CHECK(t["counts"]["hidden"] == 135);
    CHECK(t["counts"]["output"] == 4);
    CHECK(t["counts"]["feedforward_synapses"] == 315);

    REQUIRE(cli("topo --n-per-dir 5 -o " + dir.string()) == 0);
    const json t5 = json::parse(slurp(dir / "topology.json"));
    int outputs = 0;
    for (const json &n : t5["neurons"]) outputs += n["layer"] == "output";
    CHECK(outputs == 20);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    spit(dir / "broken.json", "{\"schema_version\": 1,");
    CHECK(cli("topo -c " + (dir / "broken.json").string()) == 2);
    spit(dir / "unknown.json", R"({"schema_version": 1, "colour": "red"})");
    CHECK(cli("topo -c " + (dir / "unknown.json").string()) == 2);
    CHECK(cli("topo --set network.n_per_dir=0") == 2);
    CHECK(cli("frobnicate") == 2);
    CHECK(cli("run -o " + dir.string() + " --set trajectory.radius=4.5") == 3);
    CHECK(cli("events --stdout --set trajectory.center=[1,1]") == 3);
    // the config path can come from the environment
    CHECK(cli("topo --stdout") == 0);
    const std::string env = "MOTIONDET_CONFIG=" + (dir / "unknown.json").string() + " ";
    CHECK(std::system((env + MOTIONDET_BIN + " topo --stdout >/dev/null 2>&1").c_str()) != 0);
}

TEST_CASE("zero-duration run writes an empty spike table") {
    const fs::path dir = scratch("zero");
    REQUIRE(cli("run --duration 0 -o " + dir.string()) == 0);
    CHECK(slurp(dir / "spikes.csv") == "neuron_id,t_s\n");
}

TEST_CASE("circle run outputs") {
    const fs::path dir = scratch("circle");
    REQUIRE(cli("run -o " + dir.string()) == 0);
    std::istringstream rates(slurp(dir / "rates.csv"));
    std::string header;
    std::getline(rates, header);
    CHECK(header == "t_s,up_hz,down_hz,left_hz,right_hz,up_ideal_hz,down_ideal_hz,left_ideal_hz,right_ideal_hz");
    std::string row;
    std::getline(rates, row);
    CHECK(std::count(row.begin(), row.end(), ',') == 8);

    const json s = json::parse(slurp(dir / "summary.json"));
    CHECK(s["s_acc"].is_number());
    CHECK(s["spike_counts"].size() == 4);
    CHECK(s["phase_lag_deg"]["right_to_down"].is_number());
    CHECK(s["config"]["schema_version"] == 1);
}

TEST_CASE("identical configs give byte-identical files") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const std::string extra : {"", " --kind eight", " --n-per-dir 5"}) {
        REQUIRE(cli("run -o " + a.string() + extra) == 0);
        REQUIRE(cli("run -o " + b.string() + extra) == 0);
        CHECK(slurp(a / "spikes.csv") == slurp(b / "spikes.csv"));
        CHECK(slurp(a / "rates.csv") == slurp(b / "rates.csv"));
        CHECK(!slurp(a / "spikes.csv").empty());
    }
    REQUIRE(cli("events -o " + a.string()) == 0);
    REQUIRE(cli("events -o " + b.string()) == 0);
    CHECK(slurp(a / "events.csv") == slurp(b / "events.csv"));
}

TEST_CASE("event CSV round trip") {
    const Trajectory c = make_circle(Field{}, 4.5, 5.0, 3.0, 0.5, 2.0);
    const EventStream ev = generate_events(c);
    std::stringstream ss;
    write_events_csv(ss, ev);
    const EventStream back = read_events_csv(ss, 10, 11);
    REQUIRE(back.size() == ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
        CHECK(back.events()[i].x == ev.events()[i].x);
        CHECK(back.events()[i].t == quantize(ev.events()[i].t));
    }
}

TEST_CASE("run result structure") {
    RunConfig cfg = default_config();
    const RunResult r = run_experiment(cfg);
    CHECK(r.t_end == doctest::Approx(10.0));
    CHECK(r.grid.at(r.window_begin) == doctest::Approx(2.0));
    REQUIRE(r.score);
    CHECK(r.score->raw <= 1.0);
    CHECK(r.sim.diagnostics.output_spikes > 0);
    // every output group fires for a mid-band circle
    for (std::size_t c = 0; c < 4; ++c) CHECK(r.spike_counts[c] > 0);

    cfg.duration = 0.5; // shorter than the transient cut-off
    const RunResult short_run = run_experiment(cfg);
    CHECK(!short_run.score);
    CHECK(!short_run.notes.empty());
}

TEST_CASE("sweep rows and normalization") {
    RunConfig cfg = small_sweep();
    const auto rows = frequency_sweep(cfg);
    REQUIRE(rows.size() == 16);
    CHECK(rows[0].variant == "N1_tau500ms");
    CHECK(rows[8].variant == "N5_tau5-500ms");
    for (std::size_t i = 0; i < 8; ++i) CHECK(rows[i].frequency == cfg.sweep.frequencies[i]);
    for (const std::string v : {"N1_tau500ms", "N5_tau5-500ms"}) {
        double best = 0.0;
        for (const SweepRow &r : rows)
            if (r.variant == v) {
                CHECK(r.status == "ok");
                CHECK(r.s_acc >= 0.0);
                CHECK(r.s_acc <= 1.0);
                best = std::max(best, r.s_acc_norm);
            }
        CHECK(best == 1.0);
    }

    SweepOptions par;
    par.jobs = 4;
    CHECK(sweep_csv(frequency_sweep(cfg, par)) == sweep_csv(rows));

    RunConfig one = cfg;
    one.sweep.frequencies = {0.5};
    one.sweep.variants.resize(1);
    CHECK(frequency_sweep(one).size() == 1);
}

TEST_CASE("a failing sweep point is marked and the sweep continues") {
    RunConfig cfg = default_config();
    cfg.radius = 4.5; // leaves the field
    cfg.sweep.frequencies = {0.5, 1.0};
    cfg.sweep.variants.resize(1);
    const auto rows = frequency_sweep(cfg);
    REQUIRE(rows.size() == 2);
    for (const SweepRow &r : rows) CHECK(r.status.rfind("error: ", 0) == 0);
    CHECK(parse_sweep_csv(sweep_csv(rows)).size() == 2);
}

TEST_CASE("sweep CSV parsing drops torn lines") {
    const std::string text = "freq_hz,variant,s_acc,s_acc_norm,s_acc_raw,status\n"
                             "0.5,N1,0.4,1,0.4,ok\n"
                             "1,N1,0.3,0.75,0.3,o";
    const auto rows = parse_sweep_csv(text);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].frequency == 0.5);
    CHECK(rows[0].s_acc_norm == 1.0);
}

TEST_CASE("resumed sweep matches an uninterrupted one") {
    const fs::path full = scratch("sweep_full"), cut = scratch("sweep_cut");
    const std::string freqs = " --set sweep.frequency_range_hz=[0.1,4] --set sweep.points=8";
    REQUIRE(cli("sweep -o " + full.string() + freqs) == 0);
    const std::string reference = slurp(full / "sweep.csv");
    CHECK(std::count(reference.begin(), reference.end(), '\n') == 17);

    // an interrupted run leaves the progress file: a few finished rows, then a torn write
    std::istringstream in(reference);
    std::string line, partial;
    for (int i = 0; i < 6 && std::getline(in, line); ++i) partial += line + "\n";
    std::getline(in, line);
    partial += line.substr(0, line.size() / 2);
    spit(cut / "sweep.csv", partial);
    REQUIRE(cli("sweep --resume -o " + cut.string() + freqs) == 0);
    CHECK(slurp(cut / "sweep.csv") == reference);

    // resuming a complete file recomputes nothing and changes nothing
    REQUIRE(cli("sweep --resume -j 3 -o " + cut.string() + freqs) == 0);
    CHECK(slurp(cut / "sweep.csv") == reference);
}
