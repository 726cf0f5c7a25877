#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sarkit/raster.hpp"
#include "sarkit/speckle.hpp"
#include "support/scenes.hpp"

namespace fs = std::filesystem;
using namespace sarkit;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path kFixtures = SARKIT_FIXTURE_DIR;

fs::path scratch() {
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / "sarkit_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = std::string(SARKIT_CLI_PATH) + " " + args + " 2>" + err_path.string();
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(err_path);
  std::stringstream ss;
  ss << f.rdbuf();
  r.err = ss.str();
  return r;
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("cli: sarcnn without weights is a usage error") {
  write_raster(sarkit::testing::quadrant_scene(32), path("x.rad"));
  const auto r = run("despeckle --in " + path("x.rad") + " --looks 1 --method sarcnn --out " + path("o.rad"));
  CHECK(r.code == 1);
  CHECK(r.err.find("requires --weights") != std::string::npos);
  CHECK(r.err.find("\"error\":\"usage\"") != std::string::npos);
  CHECK(run("").code == 1);
  CHECK(run("despeckle --looks 1").code == 1);
  CHECK(run("despeckle --in a --out b --looks 1 --method median").code == 1);
}

TEST_CASE("cli: eval is reproducible for a fixed seed") {
  write_raster(sarkit::testing::quadrant_scene(40), path("clean.rad"));
  const std::string args = "eval --clean " + path("clean.rad") + " --method homom-tv --realizations 20 --seed 7";
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# sarkit ") == 0);
  CHECK(a.out.find("\"seed\":7") != std::string::npos);
  CHECK(a.out.find("realization\tseed\tpsnr_noisy") != std::string::npos);
  const auto c = run("--threads 1 " + args);
  CHECK(c.out.substr(c.out.find("realization")) == a.out.substr(a.out.find("realization")));
}

TEST_CASE("cli: weights inspect on the toy net") {
  const auto r = run("weights inspect " + (kFixtures / "toy5.scnw").string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("D=5") != std::string::npos);
  CHECK(r.out.find("1→64→64→64→64→1") != std::string::npos);
  CHECK(r.out.find("Conv+BN+ReLU") != std::string::npos);

  const auto bad = run("weights inspect " + (kFixtures / "chain_mismatch.scnw").string());
  CHECK(bad.code == 2);
  CHECK(bad.err.find("\"error\":\"parse\"") != std::string::npos);
  CHECK(bad.err.find("channel chain") != std::string::npos);
}

TEST_CASE("cli: simulate, despeckle and metrics") {
  write_raster(sarkit::testing::quadrant_scene(64), path("x64.rad"));
  REQUIRE(run("simulate --in " + path("x64.rad") + " --looks 1 --seed 3 --out " + path("y64.rad")).code == 0);
  CHECK(run("simulate --in " + path("x64.rad") + " --looks 1 --out " + path("y64.rad")).code == 1);

  for (const std::string m : {"homom-tv", "mulog-tv"}) {
    const auto r = run("despeckle --in " + path("y64.rad") + " --looks 1 --method " + m + " --out " + path("d.rad"));
    CHECK(r.code == 0);
    CHECK(read_raster(path("d.rad")).width() == 64);
  }
  CHECK(run("despeckle --in " + path("y64.rad") + " --looks 1 --method mulog-tv --subsample2 --out " + path("d2.rad"))
            .code == 0);
  CHECK(read_raster(path("d2.rad")).width() == 32);

  run("--threads 1 despeckle --in " + path("y64.rad") + " --looks 1 --out " + path("t1.rad"));
  run("--threads 4 despeckle --in " + path("y64.rad") + " --looks 1 --out " + path("t4.rad"));
  CHECK(read_file_bytes(path("t1.rad")) == read_file_bytes(path("t4.rad")));

  const auto cnn = run("despeckle --in " + path("y64.rad") + " --looks 1 --method mulog-cnn --weights " +
                       (kFixtures / "zero.scnw").string() + " --out " + path("c.rad"));
  CHECK(cnn.code == 2);
  CHECK(cnn.err.find("\"error\":\"config\"") != std::string::npos);

  const auto enl = run("metrics enl --in " + path("y64.rad") + " --region 0,0,32,32");
  CHECK(enl.code == 0);
  CHECK(enl.out.find("enl: ") != std::string::npos);
  CHECK(run("metrics enl --in " + path("y64.rad") + " --region 0,0,10,10").code == 2);
  const auto ratio = run("metrics ratio --noisy " + path("y64.rad") + " --denoised " + path("x64.rad"));
  CHECK(ratio.code == 0);
  CHECK(ratio.out.find("mean: ") != std::string::npos);

  const auto missing = run("despeckle --in " + path("nope.rad") + " --looks 1 --out " + path("o.rad"));
  CHECK(missing.code == 2);
  CHECK(missing.err.find("\"exit_code\":2") != std::string::npos);

  CHECK(run("convert --in " + path("d.rad") + " --out " + path("d.pgm")).code == 0);
  CHECK(fs::exists(path("d.pgm")));
}

TEST_CASE("cli: dataset commands") {
  write_raster(sarkit::testing::quadrant_scene(60), path("c60.rad"));
  const auto pairs = run("dataset pairs --in " + path("c60.rad") + " --looks 1 --seed 5 --out-dir " + path("arch"));
  REQUIRE(pairs.code == 0);
  CHECK(pairs.out.find("pairs: 72") != std::string::npos);
  CHECK(fs::exists(scratch() / "arch" / "manifest.tsv"));

  std::string dates;
  for (int t = 0; t < 4; ++t) {
    const auto y = simulate_speckle(sarkit::testing::quadrant_scene(64), 1.0, 50 + t);
    write_raster(y, path("date" + std::to_string(t) + ".rad"));
    dates += " " + path("date" + std::to_string(t) + ".rad");
  }
  CHECK(run("dataset multilook --in" + dates + " --out " + path("ml.rad")).code == 0);
  const auto gt = run("dataset groundtruth --in" + dates + " --region 0,0,32,32 --out " + path("gt.rad"));
  CHECK(gt.code == 0);
  CHECK(gt.out.find("# warning:") != std::string::npos);
  CHECK(run("dataset patches --in " + path("ml.rad") + " --size 32 --stride 16 --out-dir " + path("pt")).out.find(
            "patches: 9") != std::string::npos);
}
