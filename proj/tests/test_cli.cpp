#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "selfforce_test_cli";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SELFFORCE_CLI) + " " + args + " > " + (kScratch / "stdout.txt").string() +
                          " 2> " + (kScratch / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto p = kScratch / name;
  std::ofstream(p) << text;
  return p;
}

const char* kAnalytic = "mode = analytic\n[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 0.5\n[numerics]\nT = 5\n";

std::string reference(const std::string& mode, const std::string& courant) {
  return "mode = " + mode +
         "\n[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 0.5\nsigma = 0.02\n[numerics]\ndx = 0.004\ncourant = " + courant +
         "\nT = 10\nstride = 10\n";
}

struct Scratch {
  Scratch() {
    fs::remove_all(kScratch);
    fs::create_directories(kScratch);
  }
  ~Scratch() { fs::remove_all(kScratch); }
};

}  // namespace

TEST_CASE("analytic run succeeds and writes its directory") {
  Scratch s;
  const auto cfg = write_config("a.cfg", kAnalytic);
  const auto out = kScratch / "out";
  CHECK(run_cli("analytic --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "config.echo"));
  CHECK(fs::exists(out / "format_version"));
  CHECK(fs::exists(out / "timeseries.csv"));
  const auto summary = nlohmann::json::parse(slurp(out / "run.json"));
  CHECK(summary.contains("mode"));
}

TEST_CASE("usage errors exit with status 2") {
  Scratch s;
  const auto cfg = write_config("a.cfg", kAnalytic);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("spectral --config " + cfg.string()) == 2);
  CHECK(run_cli("analytic") == 2);
  CHECK(run_cli("analytic --config " + (kScratch / "missing.cfg").string()) == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("IoError") != std::string::npos);
}

TEST_CASE("configuration errors exit with status 2 and name the problem") {
  Scratch s;
  const auto bad = write_config("bad.cfg", "mode = analytic\n[physics]\nm = 1\nc = 1\nbta = 1\nv0 = 0.5\n");
  CHECK(run_cli("analytic --config " + bad.string() + " --out " + (kScratch / "o").string()) == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("UnknownKey") != std::string::npos);
  const auto fast = write_config("fast.cfg", "mode = analytic\n[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 1.5\n[numerics]\nT = 1\n");
  CHECK(run_cli("analytic --config " + fast.string() + " --out " + (kScratch / "o").string()) == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("SuperluminalInitialVelocity") != std::string::npos);
}

TEST_CASE("mode on the command line must match the config") {
  Scratch s;
  const auto cfg = write_config("a.cfg", kAnalytic);
  CHECK(run_cli("fdtd --config " + cfg.string() + " --out " + (kScratch / "o").string()) == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("InvalidConfig") != std::string::npos);
}

TEST_CASE("verify stops on a CFL violation before any criterion runs") {
  Scratch s;
  const auto cfg = write_config("v.cfg", reference("verify", "0.95"));
  const auto out = kScratch / "v";
  CHECK(run_cli("verify --config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK(slurp(kScratch / "stderr.txt").find("CflViolation") != std::string::npos);
  CHECK(slurp(kScratch / "stdout.txt").find("A1") == std::string::npos);
}

TEST_CASE("fdtd run from the command line") {
  Scratch s;
  const auto cfg = write_config(
      "f.cfg",
      "mode = fdtd\n[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 0.5\nsigma = 0.04\n[numerics]\ndx = 0.01\ndt = 0.005\n"
      "T = 1\nstride = 10\nsnapshot_times = 0.5\n[paths]\noutput_dir = " +
          (kScratch / "from_cfg").string() + "\n");
  CHECK(run_cli("fdtd --config " + cfg.string()) == 0);
  CHECK(fs::exists(kScratch / "from_cfg" / "snapshot_000.csv"));
  CHECK(fs::exists(kScratch / "from_cfg" / "timeseries.csv"));
}

TEST_CASE("verify reports one line per criterion and a JSON report") {
  Scratch s;
  const auto cfg = write_config("v.cfg", reference("verify", "0.5"));
  const auto out = kScratch / "v";
  const int code = run_cli("verify --config " + cfg.string() + " --out " + out.string());
  CHECK((code == 0 || code == 1));
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  REQUIRE(report["criteria"].size() == 8);
  bool all = true;
  for (const auto& c : report["criteria"]) all = all && c["pass"].get<bool>();
  CHECK(code == (all ? 0 : 1));
  const auto text = slurp(kScratch / "stdout.txt");
  for (const char* id : {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"}) CHECK(text.find(id) != std::string::npos);
}
