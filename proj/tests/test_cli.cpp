#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
    const std::string cmd = std::string(VORTEXLAB_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "vortexlab_cli_test";
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

} // namespace

TEST_CASE("CLI exit codes") {
    const auto dir = scratch();
    const auto cfg = dir / "one.json";
    write(cfg, R"({"points": [[0, 0], [1, 0.5]], "background": {"kind": "zero"},
                  "region": {"kind": "ball", "center": [0, 0], "radius": 2}})");
    const auto bad = dir / "bad.json";
    write(bad, R"({"points": [[0, 0], [0, 0]]})");
    const auto trace = dir / "trace.csv";

    CHECK(run("grow --points " + cfg.string() + " --target 2 --out " + trace.string()) == 0);
    CHECK(fs::exists(trace));
    CHECK(run("annuli --trace " + trace.string() + " --out " + (dir / "a.csv").string()) == 0);
    CHECK(run("mcr --trace " + trace.string()) == 0);
    CHECK(run("energy --points " + cfg.string() + " --tol 1e-3") == 0);
    CHECK(run("lorentz --points " + cfg.string() + " --h 0.125") == 0);
    CHECK(run("generate --kind hex --radius 3 --out " + (dir / "hex.json").string()) == 0);

    CHECK(run("grow --points " + bad.string() + " --target 2") == 1);
    CHECK(run("grow --points " + (dir / "missing.json").string() + " --target 2") == 1);
    CHECK(run("energy --points " + bad.string()) == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("verify --points " + cfg.string() + " --p 1.99") == 1);
    CHECK(run("compare-lattices --R 6") == 1);
}
