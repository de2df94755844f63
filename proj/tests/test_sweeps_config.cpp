#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rydgate/cli.hpp"
#include "rydgate/config.hpp"
#include "rydgate/sweeps.hpp"

using namespace rydgate;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string csv_of(const SweepSpec& spec) {
    std::ostringstream out;
    const auto rows = run_sweep(spec);
    write_csv(out, spec.experiment, rows);
    return out.str();
}
}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("full config file parses") {
    const std::string text = R"(
# example configuration
preset=rb87
[atoms]
n=2
[lasers]
delta_ghz=1.2
omega_c_mhz=420
omega_p_max_mhz=70
[decay]
gamma_p_per_us=36
tau_r_us=66
[interactions]
v_control_over_eps=40,17
v_ensemble_over_eps=0,5;5,0
[sweep]
experiment=blocking
points=10
start=1
stop=6
log=false
workers=2
)";
    const RunConfig config = parse_config_text(text);
    CHECK(config.used_preset);
    CHECK(config.params.n_atoms == 2);
    CHECK(config.params.delta == doctest::Approx(kTwoPi * 1.2e9));
    const double eps = epsilon(config.params);
    CHECK(config.params.v_control[1] == doctest::Approx(17.0 * eps));
    CHECK(config.params.v_ensemble[0][1] == doctest::Approx(5.0 * eps));
    // pulse duration derived from the pi-area condition when not given
    CHECK(config.params.t_raman * 1e6 == doctest::Approx(0.65306).epsilon(1e-4));
    REQUIRE(config.sweep.experiment.has_value());
    CHECK(*config.sweep.experiment == "blocking");
    CHECK(*config.sweep.points == 10);
    CHECK(*config.sweep.workers == 2);
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS(parse_config_text("[lasers]\nomega_q_mhz=10\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[paint]\ncolor=blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("preset=cs133\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[lasers]\ndelta_ghz=abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[lasers]\ndelta_ghz 1.2\n"), ConfigError);
    // required laser keys when no preset is named
    CHECK_THROWS_AS(parse_config_text("[atoms]\nn=1\n"), ConfigError);
}

TEST_CASE("scalar interaction entries broadcast") {
    const std::string text = R"(
preset=rb87
[atoms]
n=3
[interactions]
v_control_over_eps=40
v_ensemble_over_eps=7
)";
    const PhysParams p = parse_config_text(text).params;
    const double eps = epsilon(p);
    for (int k = 0; k < 3; ++k) CHECK(p.v_control[static_cast<std::size_t>(k)] ==
                                      doctest::Approx(40.0 * eps));
    CHECK(p.v_ensemble[0][2] == doctest::Approx(7.0 * eps));
    CHECK(p.v_ensemble[1][1] == 0.0);
}

TEST_CASE("explicit laser parameters without a preset") {
    const std::string text = R"(
[atoms]
n=1
[lasers]
delta_ghz=2.0
omega_c_mhz=300
omega_p_max_mhz=50
t_raman_us=0.5
)";
    const PhysParams p = parse_config_text(text).params;
    CHECK(p.delta == doctest::Approx(kTwoPi * 2.0e9));
    CHECK(p.t_raman == doctest::Approx(0.5e-6));
    CHECK(p.gamma_p == 0.0);
    CHECK(p.v_control[0] == 0.0);
}

TEST_CASE("preset dump round trips") {
    const std::string dump = preset_dump_text(2);
    const RunConfig config = parse_config_text(dump);
    const PhysParams reference = rb87_preset(2);
    CHECK(config.params.delta == doctest::Approx(reference.delta).epsilon(1e-15));
    CHECK(config.params.omega_c == doctest::Approx(reference.omega_c).epsilon(1e-15));
    CHECK(config.params.t_raman == doctest::Approx(reference.t_raman).epsilon(1e-15));
    CHECK(config.params.gamma_p == doctest::Approx(reference.gamma_p).epsilon(1e-15));
    CHECK(config.params.v_control[0] ==
          doctest::Approx(reference.v_control[0]).epsilon(1e-12));
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("sweeps");

TEST_CASE("axis values") {
    const SweepAxis lin{1.0, 6.0, 6, false};
    const auto v = lin.values();
    REQUIRE(v.size() == 6);
    CHECK(v.front() == 1.0);
    CHECK(v.back() == 6.0);
    CHECK(v[1] == doctest::Approx(2.0));

    const SweepAxis log{0.1, 1e4, 6, true};
    const auto w = log.values();
    CHECK(w[1] / w[0] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(w.back() == doctest::Approx(1e4).epsilon(1e-12));

    CHECK_THROWS_AS((SweepAxis{1.0, 2.0, 1, false}.values()), std::invalid_argument);
    CHECK_THROWS_AS((SweepAxis{0.0, 2.0, 3, true}.values()), std::invalid_argument);
}

TEST_CASE("worker resolution order") {
    CHECK(resolve_worker_count(3) == 3);
    setenv("RYDGATE_WORKERS", "5", 1);
    CHECK(resolve_worker_count(0) == 5);
    setenv("RYDGATE_WORKERS", "junk", 1);
    CHECK(resolve_worker_count(0) >= 1);
    unsetenv("RYDGATE_WORKERS");
    CHECK(resolve_worker_count(0) >= 1);
}

TEST_CASE("blocking sweep matches the figure thresholds") {
    SweepSpec spec = SweepSpec::defaults(Experiment::BlockingVsRatio);
    spec.axis.points = 6;  // 1,2,3,4,5,6
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) {
        REQUIRE_FALSE(row.failed);
        CHECK(row.results[0] >= 0.0);
        CHECK(row.results[0] <= 1.0);
        CHECK(row.wall_time_s > 0.0);
    }
    CHECK(rows[1].axis[0] == doctest::Approx(2.0));
    CHECK(rows[1].results[0] >= 0.99);   // ratio 2
    CHECK(rows[5].results[0] >= 0.999);  // ratio 6
    // nondecreasing along the ratio axis past the knee
    for (std::size_t i = 2; i < rows.size(); ++i)
        CHECK(rows[i].results[0] >= rows[i - 1].results[0] - 1e-4);
}

TEST_CASE("transfer sweep spans blocked to ideal") {
    SweepSpec spec = SweepSpec::defaults(Experiment::TransferVsV);
    spec.axis = {1.0, 1e4, 5, true};
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 5);
    CHECK(rows[4].results[0] >= 0.999);  // V -> infinity proxy at 1e4 eps
    // V = 40 eps sits between the grid points; check directly
    SweepSpec squeezed = spec;
    squeezed.axis = {40.0, 41.0, 2, false};
    CHECK(run_sweep(squeezed)[0].results[0] >= 0.98);
}

TEST_CASE("zero shift blocks the swap") {
    // with no interaction the EIT condition survives and nothing transfers
    GateOptions options;
    const GateOutcome out = run_gate(ControlInput::one(), "A", rb87_preset(1, 0.0), options);
    CHECK(out.fidelity <= 0.01);
}

TEST_CASE("susceptibility sweep shape") {
    // the default grid resolves the epsilon-wide EIT feature near resonance
    SweepSpec spec = SweepSpec::defaults(Experiment::Susceptibility);
    const auto rows = run_sweep(spec);
    const PhysParams p = rb87_preset(1);

    double max_abs_blocked = 0.0;
    for (const auto& row : rows)
        max_abs_blocked = std::max(max_abs_blocked,
                                   std::abs(Complex(row.results[0], row.results[1])));

    // blocked curve changes sign across two-photon resonance
    bool sign_change = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i - 1].axis[0] <= p.delta && p.delta <= rows[i].axis[0])
            sign_change = (rows[i - 1].results[0] < 0.0) != (rows[i].results[0] < 0.0);
    }
    CHECK(sign_change);

    // unblocked absorption at the operating point is finite
    const Complex unblocked_at_delta = susceptibility(p.delta, p, p.v_control[0]);
    CHECK(std::abs(unblocked_at_delta) >
          1e3 * std::abs(susceptibility(p.delta, p, 0.0)));

    // both curves decay toward the window edges
    const double edge = std::abs(Complex(rows.front().results[0], rows.front().results[1]));
    CHECK(edge < 1e-2 * max_abs_blocked);
}

TEST_CASE("ghz sweep orders its rows by curve then axis") {
    SweepSpec spec = SweepSpec::defaults(Experiment::GhzVsVjk);
    spec.axis = {1.0, 10.0, 2, true};
    spec.x_max_values = {0.3, 0.4};
    spec.n_atoms = 2;  // keep the test light
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].axis[1] == 0.3);
    CHECK(rows[1].axis[1] == 0.3);
    CHECK(rows[2].axis[1] == 0.4);
    CHECK(rows[0].axis[0] == doctest::Approx(1.0));
    CHECK(rows[1].axis[0] == doctest::Approx(10.0));
    for (const auto& row : rows) {
        REQUIRE_FALSE(row.failed);
        CHECK(row.results[0] > 0.5);
    }
}

TEST_CASE("csv headers are stable") {
    CHECK(csv_header(Experiment::BlockingVsRatio) == "ratio,fidelity,norm_loss");
    CHECK(csv_header(Experiment::TransferVsV) == "v_over_eps,fidelity,norm_loss");
    CHECK(csv_header(Experiment::GhzVsVjk) == "v_jk_over_eps,x_max,fidelity,norm_loss");
    CHECK(csv_header(Experiment::Susceptibility) ==
          "delta,re_chi_blocked,im_chi_blocked,re_chi_unblocked,im_chi_unblocked");
}

TEST_CASE("sweep output is deterministic across worker counts") {
    SweepSpec spec = SweepSpec::defaults(Experiment::BlockingVsRatio);
    spec.axis.points = 5;
    spec.worker_count = 1;
    const std::string serial = csv_of(spec);
    spec.worker_count = 4;
    const std::string parallel = csv_of(spec);
    CHECK(serial == parallel);
    spec.worker_count = 4;
    CHECK(csv_of(spec) == parallel);  // repeated run, byte identical
    // LF line endings only
    CHECK(serial.find('\r') == std::string::npos);
    // full double precision round trip on a sample value
    std::istringstream stream(serial);
    std::string header, first_row;
    std::getline(stream, header);
    std::getline(stream, first_row);
    const auto comma = first_row.find(',');
    const double ratio = std::stod(first_row.substr(0, comma));
    CHECK(ratio == 1.0);
}

TEST_CASE("experiment names round trip") {
    for (Experiment e : {Experiment::Susceptibility, Experiment::BlockingVsRatio,
                         Experiment::TransferVsV, Experiment::GhzVsVjk})
        CHECK(experiment_from_string(to_string(e)) == e);
    CHECK_THROWS_AS(experiment_from_string("warp"), std::invalid_argument);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("cli");

namespace {
int run_cli(const std::vector<std::string>& args, std::string& out, std::string& err) {
    std::ostringstream o, e;
    const int code = cli_main(args, o, e);
    out = o.str();
    err = e.str();
    return code;
}
}  // namespace

TEST_CASE("preset dump prints the parameter paragraph") {
    std::string out, err;
    CHECK(run_cli({"preset", "dump"}, out, err) == 0);
    CHECK(out.find("delta_ghz=1.2") != std::string::npos);
    CHECK(out.find("omega_p_max_mhz=70") != std::string::npos);
    CHECK(out.find("tau_r_us=66") != std::string::npos);
    CHECK(out.find("gamma_p_per_us=36") != std::string::npos);
}

TEST_CASE("gate subcommand reports fidelity") {
    std::string out, err;
    const int code =
        run_cli({"gate", "--control", "1", "--ensemble", "AA", "--v-control", "40,40"}, out, err);
    CHECK(code == 0);
    CHECK(out.find("fidelity=") != std::string::npos);
    const double fidelity = std::stod(out.substr(out.find("fidelity=") + 9));
    CHECK(fidelity > 0.9);
}

TEST_CASE("sweep subcommand emits the documented CSV") {
    std::string out, err;
    const int code = run_cli({"sweep", "blocking", "--points", "3", "--start", "2", "--stop",
                              "6", "--out", "-"},
                             out, err);
    CHECK(code == 0);
    CHECK(out.rfind("ratio,fidelity,norm_loss\n", 0) == 0);
    int lines = 0;
    for (char c : out)
        if (c == '\n') ++lines;
    CHECK(lines == 4);  // header + 3 rows
}

TEST_CASE("interfere subcommand prints the two-line report") {
    std::string out, err;
    const int code = run_cli({"interfere", "--d-aux", "2", "--ub", "phase:1.0471975511965976"},
                             out, err);
    CHECK(code == 0);
    std::istringstream stream(out);
    double p_plus, p_minus, re, im;
    REQUIRE((stream >> p_plus >> p_minus >> re >> im));
    CHECK(p_plus == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(re == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(im == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("gate subcommand writes trajectory and state files") {
    const std::string traj_path = "/tmp/rydgate_test_traj.csv";
    const std::string state_path = "/tmp/rydgate_test_state.txt";
    std::string out, err;
    const int code = run_cli({"gate", "--control", "0", "--ensemble", "A", "--trajectory",
                              traj_path, "--save-state", state_path},
                             out, err);
    REQUIRE(code == 0);

    std::ifstream traj(traj_path);
    REQUIRE(traj.good());
    std::string header;
    std::getline(traj, header);
    CHECK(header == "t,norm,pop_A,pop_B,pop_P,pop_R,pop_doubleR");
    int rows = 0;
    for (std::string line; std::getline(traj, line);) ++rows;
    CHECK(rows >= 100);

    std::ifstream state(state_path);
    REQUIRE(state.good());
    const CompositeState psi = read_state_snapshot(state);
    CHECK(psi.scheme.n_atoms == 1);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-6));
    std::remove(traj_path.c_str());
    std::remove(state_path.c_str());
}

TEST_CASE("unknown subcommands and flags exit with code 1") {
    std::string out, err;
    CHECK(run_cli({"frobnicate"}, out, err) == 1);
    CHECK_FALSE(err.empty());
    CHECK(run_cli({"gate", "--warp", "9"}, out, err) == 1);
    CHECK(run_cli({"sweep", "warp"}, out, err) == 1);
    CHECK(run_cli({"gate", "--config", "/nonexistent/file.cfg"}, out, err) == 1);
}

TEST_CASE("validate subcommand passes") {
    std::string out, err;
    CHECK(run_cli({"validate"}, out, err) == 0);
    CHECK(out.find("FAIL") == std::string::npos);
}

TEST_SUITE_END();
