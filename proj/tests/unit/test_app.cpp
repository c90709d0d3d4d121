#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "sedcat/app/config.hpp"
#include "sedcat/app/io.hpp"
#include "sedcat/app/manifest.hpp"
#include "sedcat/app/scenarios.hpp"
#include "sedcat/qm/states.hpp"

using namespace sedcat;
using namespace sedcat::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("sedcat-app-tests-" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ConfigError config_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError for: " << text);
    return ConfigError("", "");
}

// Small but physical run: coarse grid, few particles.
ExperimentConfig desk_config()
{
    ExperimentConfig c;
    c.grid.points = 1024;
    c.ensemble.particles = 200;
    c.ensemble.threads = 1;
    c.run.seed = 11;
    return c;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(SEDCAT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("empty config gives the full default configuration")
{
    const ExperimentConfig c = parse_config("");
    CHECK(c == ExperimentConfig{});
    CHECK(c.oscillator.mass == 9.11e-35);
    CHECK(c.oscillator.charge == 1.60e-19);
    CHECK(c.oscillator.omega0 == 1e16);
    CHECK(c.laser.omega1 == 2.3e16);
    CHECK(c.laser.omega2 == 0.3e16);
    CHECK(c.laser.a1 == 4.5e-8);
    CHECK(c.laser.a2 == 4.5e-8);
    CHECK(c.laser.tau == 5e-15);
    CHECK(c.ensemble.particles == 30000);
    CHECK(parse_config("# comment only\n") == c);
}

TEST_CASE("negative omega0 is rejected with its field path")
{
    const auto e = config_error("oscillator:\n  omega0: -1\n");
    CHECK(e.field() == "oscillator.omega0");
    CHECK(std::string(e.what()).find("oscillator.omega0") != std::string::npos);
}

TEST_CASE("an override changes only the named field")
{
    const ExperimentConfig c = parse_config("ensemble:\n  particles: 3000\n");
    CHECK(c.ensemble.particles == 3000);
    ExperimentConfig expected;
    expected.ensemble.particles = 3000;
    CHECK(c == expected);
}

TEST_CASE("unknown keys and sections carry their location")
{
    auto e = config_error("oscillator:\n  mas: 1\n");
    CHECK(e.field() == "oscillator.mas");
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);

    e = config_error("grid:\n  points: 2048\nextras:\n  x: 1\n");
    CHECK(e.field() == "extras");
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
}

TEST_CASE("syntax and type errors carry their location")
{
    auto e = config_error("laser:\n  tau: [1, 2\n");
    CHECK(e.line() > 0);

    e = config_error("laser:\n  tau: abc\n");
    CHECK(e.field() == "laser.tau");
    CHECK(e.line() == 2);
    CHECK(e.column() == 8);

    e = config_error("ensemble:\n  particles: -5\n");
    CHECK(e.field() == "ensemble.particles");

    e = config_error("zpf:\n  spatial: maybe\n");
    CHECK(e.field() == "zpf.spatial");

    e = config_error("- 1\n- 2\n");
    CHECK(e.line() == 1);
}

TEST_CASE("validation names the failing field")
{
    CHECK(config_error("grid:\n  points: 1000\n").field() == "grid.points");
    CHECK(config_error("grid:\n  steps_per_period: 100\n").field() == "grid.steps_per_period");
    CHECK(config_error("laser:\n  omega2: 3e16\n").field() == "laser.omega1");
    CHECK(config_error("ensemble:\n  preparation: warm\n").field() == "ensemble.preparation");
    CHECK(config_error("ensemble:\n  relax_time: 1e-14\n").field() == "ensemble.relax_time");
    CHECK(config_error("run:\n  scenario: everything\n").field() == "run.scenario");
    CHECK(config_error("analysis:\n  fringe_window_periods: 4\n").field() ==
          "analysis.fringe_window_periods");
    // Too few linewidths between omega0 and the band edge.
    CHECK(config_error("zpf:\n  band_low: 0.9999\n").field() == "zpf");
}

TEST_CASE("serialize then parse reproduces the config")
{
    const ExperimentConfig d;
    CHECK(parse_config(serialize_config(d)) == d);

    ExperimentConfig c;
    c.oscillator.mass = 9.11e-35 / 3.0;
    c.laser.tau = 1.0 / 3.0 * 1e-14;
    c.laser.a2 = 0.0;
    c.grid.half_width_dx = 37.123456789012345;
    c.zpf.band_low = 0.1 + 0.2;
    c.zpf.spatial = true;
    c.ensemble.preparation = "relaxed";
    c.ensemble.relax_time = 2e-12;
    c.run.seed = std::numeric_limits<std::uint64_t>::max();
    c.run.output = "out dir/\"quoted\" \\ path: yes";
    c.run.scenario = "compare";
    const std::string text = serialize_config(c);
    CHECK(parse_config(text) == c);
    CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("csv files carry units and round-trip exactly")
{
    const fs::path dir = scratch("csv");
    const std::vector<double> t = {0.0, 1.0 / 3.0, -2.5e-300, 1e300};
    write_csv(dir / "a.csv", {{"time", "s", t}, {"energy", "J", {1.0, 2.0, 3.0, 4.0}}});
    std::ifstream in(dir / "a.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "time [s],energy [J]");
    const auto back = read_csv(dir / "a.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].unit == "s");
    CHECK(column(back, "time").values == t);
    CHECK_THROWS_AS(write_csv(dir / "b.csv", {{"a", "1", {1.0}}, {"b", "1", {}}}), IoError);
    CHECK_THROWS_AS(column(back, "missing"), IoError);
}

TEST_CASE("binary arrays are little-endian doubles with a sidecar")
{
    const fs::path dir = scratch("f64");
    F64Array a;
    a.shape = {2, 3};
    a.axes = {"time", "x"};
    a.origin = {0.0, -1.0};
    a.spacing = {0.5, 0.25};
    a.units = {"s", "m"};
    a.value_unit = "1/m";
    a.extra = {{"note", "test"}};
    a.data = {1.0, 2.0, 3.0, -0.0, 1.0 / 3.0, 6.0};
    const fs::path side = write_f64(dir / "a.f64", a);
    CHECK(side.filename() == "a.f64.json");
    CHECK(fs::file_size(dir / "a.f64") == 6 * 8);

    std::ifstream raw(dir / "a.f64", std::ios::binary);
    unsigned char bytes[8];
    raw.read(reinterpret_cast<char*>(bytes), 8);
    const unsigned char one[8] = {0, 0, 0, 0, 0, 0, 0xf0, 0x3f};
    CHECK(std::equal(bytes, bytes + 8, one));

    const auto b = read_f64(dir / "a.f64");
    CHECK(b.shape == a.shape);
    CHECK(b.spacing == a.spacing);
    CHECK(b.units == a.units);
    CHECK(b.value_unit == "1/m");
    CHECK(b.extra.at("note") == "test");
    CHECK(b.data == a.data);
    CHECK(std::signbit(b.data[3]));

    std::ofstream(dir / "a.f64", std::ios::app | std::ios::binary) << 'x';
    CHECK_THROWS_AS(read_f64(dir / "a.f64"), IoError);
}

TEST_CASE("sha256 matches the standard test vector")
{
    const fs::path dir = scratch("sha");
    write_text(dir / "abc", "abc");
    CHECK(sha256_file(dir / "abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    write_text(dir / "empty", "");
    CHECK(sha256_file(dir / "empty") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest is written before and finalized after a run")
{
    const fs::path dir = scratch("manifest");
    ExperimentConfig c;
    c.run.seed = 99;
    {
        ManifestWriter m(dir, "qm-run", c);
        const auto early = nlohmann::json::parse(read_text(m.path()));
        CHECK(early.at("status") == "running");
        CHECK(early.at("seeds").at("master") == 99);
        CHECK_THROWS_AS(ManifestReader{m.path()}, IoError);

        m.csv("t.csv", "role.t", {{"time", "s", {1.0, 2.0}}});
        m.text("note.txt", "role.note", "hello\n");
        CHECK_THROWS_AS(m.text("note.txt", "role.other", "again"), IoError);
        m.add_check({4, "parity", 1e-9, "< 1e-4", true, "ok"});
        m.finalize();
    }
    const ManifestReader r(dir / "manifest.json");
    CHECK(r.scenario() == "qm-run");
    CHECK(r.config() == c);
    CHECK(r.doc().at("artifact_version") == artifact_version());
    CHECK(r.doc().at("wall_clock_seconds").get<double>() >= 0.0);
    CHECK(r.doc().at("files").size() == 2);
    CHECK(r.verify().empty());
    CHECK(r.checks().size() == 1);
    CHECK(r.checks()[0].pass);
    CHECK(r.file("role.t") == fs::absolute(dir / "t.csv"));

    write_text(dir / "note.txt", "tampered\n");
    CHECK(r.verify() == std::vector<std::string>{"note.txt"});
    CHECK_THROWS_AS(r.file("role.note"), IoError);
}

TEST_CASE("wavefunctions and ensembles survive the binary format")
{
    const auto osc = derive_oscillator(9.11e-35, 1.60e-19, 1e16);
    auto grid = qm::make_grid(osc, 40.0, 256);
    auto psi = qm::coherent_state(grid, osc, 2.0 * osc.delta_x, 0.5 * osc.delta_p);
    psi.time = 1.25e-15;
    const fs::path dir = scratch("states");
    write_f64(dir / "psi.f64", wavefunction_array(psi));
    const auto back = wavefunction_from(read_f64(dir / "psi.f64"));
    CHECK(back.time == psi.time);
    CHECK(back.grid.x_min == grid.x_min);
    CHECK(back.grid.n_points == grid.n_points);
    CHECK(back.psi == psi.psi);

    sed::EnsembleSnapshot s;
    s.time = -3e-15;
    s.x = {1e-12, -2e-12, 0.0};
    s.v = {5.0, -6.0, 7.0};
    s.master_seed = 42;
    write_f64(dir / "ens.f64", ensemble_array(s));
    const auto e = ensemble_from(read_f64(dir / "ens.f64"));
    CHECK(e.time == s.time);
    CHECK(e.x == s.x);
    CHECK(e.v == s.v);
    CHECK(e.master_seed == 42);
    CHECK_THROWS_AS(ensemble_from(read_f64(dir / "psi.f64")), IoError);
}

TEST_CASE("scenario chain at desk scale")
{
    const fs::path root = scratch("chain");
    ExperimentConfig c = desk_config();

    c.run.scenario = "qm-run";
    const auto qm = run_scenario(c, root);
    c.run.scenario = "sed-run";
    const auto sed = run_scenario(c, root);
    c.run.scenario = "analyze";
    const auto an = run_scenario(c, root);
    c.run.scenario = "compare";
    const auto cmp = run_scenario(c, root);

    for (const auto* r : {&qm, &sed, &an, &cmp}) {
        const ManifestReader m(r->manifest);
        CHECK(m.verify().empty());
        for (const auto& f : m.doc().at("files")) {
            CHECK(fs::exists(m.path().parent_path() / f.at("path").get<std::string>()));
        }
    }

    const ManifestReader mq(qm.manifest);
    CHECK(read_f64(mq.file("qm.wigner.initial")).shape == std::vector<std::size_t>{256, 256});
    const auto fock = read_csv(mq.file("qm.fock"));
    CHECK(column(fock, "p_initial").values[0] == doctest::Approx(1.0).epsilon(1e-9));
    const auto ts = read_csv(mq.file("qm.timeseries"));
    CHECK(column(ts, "energy").unit == "J");

    const ManifestReader ms(sed.manifest);
    CHECK(ms.doc().at("seeds").at("particle_subseeds").size() == 200);
    CHECK(read_f64(ms.file("sed.ensemble.final")).shape == std::vector<std::size_t>{200, 2});
    const auto h = read_f64(ms.file("sed.histograms"));
    CHECK(h.shape[1] == c.analysis.bins);
    CHECK(h.extra.at("times_s").size() == h.shape[0]);

    std::vector<int> ids;
    for (const auto* r : {&qm, &an, &cmp}) {
        for (const auto& ch : r->checks) {
            ids.push_back(ch.id);
        }
    }
    CHECK(ids == std::vector<int>{3, 4, 5, 6, 8, 9, 10});
    // Quantum checks do not depend on the ensemble size.
    for (const auto* r : {&qm, &an}) {
        for (const auto& ch : r->checks) {
            CHECK_MESSAGE(ch.pass, "C" << ch.id << " " << ch.detail);
        }
    }
    const ManifestReader mc(cmp.manifest);
    const auto fr = nlohmann::json::parse(read_text(mc.file("compare.fringes")));
    CHECK(fr.at("qm").at("contrast").get<double>() > 0.5);
    CHECK(mc.doc().at("inputs").size() == 2);
}

TEST_CASE("sed-run outputs are byte-identical across repeats and thread counts")
{
    ExperimentConfig c = desk_config();
    c.ensemble.particles = 64;
    c.run.scenario = "sed-run";
    const fs::path a = scratch("repeat-a");
    const fs::path b = scratch("repeat-b");
    run_scenario(c, a);
    c.ensemble.threads = 3;
    run_scenario(c, b);
    const auto ja = nlohmann::json::parse(read_text(a / "sed-run" / "manifest.json"));
    const auto jb = nlohmann::json::parse(read_text(b / "sed-run" / "manifest.json"));
    CHECK(ja.at("files") == jb.at("files"));

    c.run.seed = 12;
    const fs::path d = scratch("repeat-c");
    run_scenario(c, d);
    const auto jd = nlohmann::json::parse(read_text(d / "sed-run" / "manifest.json"));
    CHECK(ja.at("files") != jd.at("files"));
}

TEST_CASE("analyze without upstream runs fails and records the failure")
{
    const fs::path root = scratch("orphan");
    ExperimentConfig c = desk_config();
    c.run.scenario = "analyze";
    CHECK_THROWS_AS(run_scenario(c, root), IoError);
    const auto j = nlohmann::json::parse(read_text(root / "analyze" / "manifest.json"));
    CHECK(j.at("status") == "failed");
    CHECK(j.at("error").get<std::string>().find("qm-run") != std::string::npos);
}

TEST_CASE("validate-appendix passes its check")
{
    const fs::path root = scratch("appendix");
    ExperimentConfig c;
    c.run.scenario = "validate-appendix";
    const auto r = run_scenario(c, root);
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].id == 11);
    CHECK_MESSAGE(r.checks[0].pass, r.checks[0].detail);
}

TEST_CASE("command-line exit codes")
{
    const fs::path dir = scratch("cli");
    write_text(dir / "bad.yaml", "oscillator:\n  omega0: -1\n");
    write_text(dir / "unknown.yaml", "oscilator:\n  omega0: 1\n");
    CHECK(run_cli("--config " + (dir / "bad.yaml").string()) == 2);
    CHECK(run_cli("--config " + (dir / "unknown.yaml").string()) == 2);
    CHECK(run_cli("--scenario nonsense") == 2);
    CHECK(run_cli("--no-such-flag") == 2);
    CHECK(run_cli("--print-config --quiet") == 0);

    // An unstable drive: a huge vector potential throws particles out.
    write_text(dir / "wild.yaml",
               "laser:\n  a1: 4.5e-2\n  a2: 4.5e-2\nensemble:\n  particles: 8\n");
    CHECK(run_cli("--config " + (dir / "wild.yaml").string() + " --scenario sed-run --quiet --out " +
                  (dir / "wild").string()) == 3);

    // Few particles: the fringe check in compare fails, which matters only with --check.
    write_text(dir / "small.yaml",
               "grid:\n  points: 1024\nensemble:\n  particles: 100\n  threads: 1\n");
    const std::string base = "--config " + (dir / "small.yaml").string() + " --quiet --out " +
                             (dir / "out").string();
    REQUIRE(run_cli(base + " --scenario qm-run") == 0);
    REQUIRE(run_cli(base + " --scenario sed-run --seed 5") == 0);
    CHECK(run_cli(base + " --scenario compare") == 0);
    CHECK(run_cli(base + " --scenario compare --check") == 4);

    const ManifestReader m(dir / "out" / "sed-run" / "manifest.json");
    CHECK(m.config().run.seed == 5);
    CHECK(m.config().run.output == (dir / "out").string());

    ::setenv("SEDCAT_OUTPUT_ROOT", (dir / "env").string().c_str(), 1);
    CHECK(run_cli("--scenario validate-appendix --quiet") == 0);
    ::unsetenv("SEDCAT_OUTPUT_ROOT");
    CHECK(fs::exists(dir / "env" / "validate-appendix" / "manifest.json"));
}

TEST_CASE("paper-repro manifest resolves every figure input")
{
    const fs::path root = scratch("repro");
    ExperimentConfig c = desk_config();
    c.ensemble.particles = 100;
    c.run.scenario = "paper-repro";
    const auto r = run_scenario(c, root);
    CHECK(r.manifest == root / "paper-repro" / "manifest.json");

    std::vector<int> ids;
    for (const auto& ch : r.checks) {
        ids.push_back(ch.id);
    }
    std::sort(ids.begin(), ids.end());
    CHECK(ids == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});

    const ManifestReader repro(r.manifest);
    CHECK(repro.verify().empty());
    CHECK(read_text(repro.file("paper-repro.summary")).find("C07") != std::string::npos);
    CHECK(figure_inputs().size() == 8);
    for (const auto& [id, inputs] : figure_inputs()) {
        for (const auto& in : inputs) {
            CHECK_MESSAGE(fs::exists(resolve_figure_input(repro, in)), id << " " << in.role);
        }
    }

    // Every emitted file is listed by exactly one manifest.
    std::map<fs::path, int> listed;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.path().filename() == "manifest.json") {
            const ManifestReader m(e.path());
            for (const auto& f : m.doc().at("files")) {
                ++listed[fs::weakly_canonical(e.path().parent_path() / f.at("path").get<std::string>())];
            }
        }
    }
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file() && e.path() != r.manifest) {
            CHECK_MESSAGE(listed[fs::weakly_canonical(e.path())] == 1, e.path().string());
        }
    }
}
