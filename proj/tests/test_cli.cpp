#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "cryosim/cli.hpp"

using namespace cryo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("cryosim_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = cli::run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

// Fast plant for quick CLI runs.
const char* kFastParams =
    "[plant]\n"
    "matrix_heat_cap = 0.4\n";

}  // namespace

TEST_CASE("no arguments prints usage and exits nonzero") {
    std::string err;
    const int rc = run({}, nullptr, &err);
    CHECK(rc == cli::kUsage);
    CHECK(err.find("usage:") != std::string::npos);
}

TEST_CASE("unknown subcommand and bad flags exit with the usage code") {
    CHECK(run({"warp-drive"}) == cli::kUsage);
    CHECK(run({"cooldown", "--bogus"}) == cli::kUsage);
    CHECK(run({"cooldown", "--power"}) == cli::kUsage);
}

TEST_CASE("config errors exit with code 2") {
    TempDir dir;
    const fs::path bad = dir.path / "bad.ini";
    write_file(bad.string(), "[plant]\neps = 1.5\n");
    std::string err;
    const int rc = run({"cooldown", "--params", bad.string(), "--out",
                        (dir.path / "out").string()},
                       nullptr, &err);
    CHECK(rc == cli::kConfigError);
    CHECK(err.find("effectiveness") != std::string::npos);
    CHECK(run({"cooldown", "--params", (dir.path / "missing.ini").string()}) ==
          cli::kConfigError);  // unreadable config file
}

TEST_CASE("cooldown writes trace and summary") {
    TempDir dir;
    const fs::path params = dir.path / "params.ini";
    write_file(params.string(), kFastParams);
    const fs::path out = dir.path / "out";
    std::string text;
    const int rc = run({"cooldown", "--params", params.string(), "--out", out.string(),
                        "--power", "6.0"},
                       &text);
    REQUIRE(rc == cli::kOk);
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(text.find("cooldown:") != std::string::npos);
    const std::string summary = read_file((out / "summary.json").string());
    CHECK(summary.find("\"cooldown_time_s\"") != std::string::npos);
    CHECK(summary.find("\"config_hash\"") != std::string::npos);
    const std::string csv = read_file((out / "trace.csv").string());
    CHECK(csv.rfind("t,T_E,T_C,", 0) == 0);
}

TEST_CASE("closed-loop requires a set-point profile") {
    TempDir dir;
    const fs::path params = dir.path / "params.ini";
    write_file(params.string(), kFastParams);
    CHECK(run({"closed-loop", "--params", params.string(), "--out",
               (dir.path / "out").string()}) == cli::kConfigError);
}

TEST_CASE("closed-loop runs a scenario file and reports metrics") {
    TempDir dir;
    const fs::path params = dir.path / "params.ini";
    write_file(params.string(), kFastParams);
    const fs::path scenario = dir.path / "scenario.ini";
    write_file(scenario.string(),
               "[scenario]\n"
               "duration = 240\n"
               "setpoint = 0:260 120:250\n");
    const fs::path out = dir.path / "out";
    const int rc = run({"closed-loop", "--params", params.string(), "--scenario",
                        scenario.string(), "--out", out.string()});
    REQUIRE(rc == cli::kOk);
    const std::string summary = read_file((out / "summary.json").string());
    CHECK(summary.find("\"setpoint_response\"") != std::string::npos);
}

TEST_CASE("calibrate emits a calibrated parameter file") {
    TempDir dir;
    const fs::path params = dir.path / "params.ini";
    write_file(params.string(), kFastParams);
    const fs::path out = dir.path / "out";
    // Self-consistent target: the fit converges immediately.
    CoolerParams p;
    p.matrix_heat_cap = 0.4;
    const SteadyState st = steady_state(p, 1.6, 0.0);
    std::ostringstream target;
    target << "1.6:0:" << st.cold;
    const int rc = run({"calibrate", "--params", params.string(), "--out", out.string(),
                        "--target", target.str()});
    REQUIRE(rc == cli::kOk);
    CHECK(fs::exists(out / "calibrated.ini"));
    const ParsedConfig cal = parse_config(read_file((out / "calibrated.ini").string()));
    CHECK(cal.params.matrix_heat_cap == 0.4);
    CHECK(run({"calibrate", "--target", "1.6:0"}) == cli::kUsage);  // malformed target
}

TEST_CASE("reruns are byte-identical") {
    TempDir dir;
    const fs::path params = dir.path / "params.ini";
    write_file(params.string(), kFastParams);
    const fs::path out1 = dir.path / "a";
    const fs::path out2 = dir.path / "b";
    for (const fs::path& out : {out1, out2}) {
        REQUIRE(run({"cooldown", "--params", params.string(), "--out", out.string(),
                     "--power", "5.0", "--seedless"}) == cli::kOk);
    }
    CHECK(read_file((out1 / "trace.csv").string()) ==
          read_file((out2 / "trace.csv").string()));
    CHECK(read_file((out1 / "summary.json").string()) ==
          read_file((out2 / "summary.json").string()));
}
