#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "selfforce/config.hpp"
#include "support.hpp"

using namespace selfforce;
using namespace selfforce::config;

namespace {

const char* kFdtd = R"(mode = fdtd
[physics]
m = 1
c = 1
beta = 1
v0 = 0.5
sigma = 0.02
[numerics]
dx = 0.004
courant = 0.5   # Courant number
T = 10
stride = 10
snapshot_times = 2.5, 5
[probes]
x = -1, 0, 1
[paths]
output_dir = out
)";

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal analytic config") {
  const auto c = parse_config("mode = analytic\n[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 0.5\n[numerics]\nT = 10\n");
  CHECK(c.mode == Mode::Analytic);
  CHECK(c.physics == PhysicalParams{1, 1, 1, 0.5, 0});
  CHECK(c.numerics.T == 10.0);
  CHECK(c.numerics.stride == 1);
  CHECK(c.time_step() == doctest::Approx(0.1));
  CHECK_FALSE(c.output_dir.has_value());
}

TEST_CASE("full fdtd config") {
  const auto c = parse_config(kFdtd);
  CHECK(c.mode == Mode::Fdtd);
  CHECK(c.physics.sigma == 0.02);
  CHECK(c.numerics.dx == 0.004);
  CHECK(c.numerics.courant == 0.5);
  CHECK_FALSE(c.numerics.dt.has_value());
  CHECK(c.time_step() == doctest::Approx(0.002).epsilon(1e-15));
  CHECK(c.numerics.stride == 10);
  CHECK(c.numerics.snapshot_times == std::vector<double>{2.5, 5});
  CHECK(c.probes == std::vector<double>{-1, 0, 1});
  CHECK(c.output_dir == "out");
}

TEST_CASE("echo round-trips") {
  const auto c = parse_config(kFdtd);
  CHECK(parse_config(echo_config(c)) == c);
  CHECK(echo_config(parse_config(echo_config(c))) == echo_config(c));
  RunConfig odd = c;
  odd.physics.v0 = 0.1 + 0.2;
  odd.numerics.courant.reset();
  odd.numerics.dt = 1.0 / 3 * 0.004;
  CHECK(parse_config(echo_config(odd)) == odd);
}

TEST_CASE("mode names") {
  for (Mode m : {Mode::Analytic, Mode::Duhamel, Mode::Fdtd, Mode::Verify}) CHECK(mode_from_string(to_string(m)) == m);
  CHECK(error_code([] { mode_from_string("rk4"); }) == ErrorCode::TypeError);
}

TEST_CASE("superluminal initial velocity is rejected") {
  CHECK(error_code([] { parse_config("mode = analytic\n[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 1.5\n[numerics]\nT = 1\n"); }) ==
        ErrorCode::SuperluminalInitialVelocity);
}

TEST_CASE("misspelled key names its line") {
  const std::string text = "mode = analytic\n[physics]\nm = 1\nc = 1\nbta = 1\nv0 = 0.5\n[numerics]\nT = 1\n";
  CHECK(error_code([&] { parse_config(text); }) == ErrorCode::UnknownKey);
  const auto msg = message_of(text);
  CHECK(msg.find("line 5") != std::string::npos);
  CHECK(msg.find("bta") != std::string::npos);
  CHECK(error_code([] { parse_config("mode = analytic\n[extras]\n"); }) == ErrorCode::UnknownKey);
}

TEST_CASE("missing keys are reported") {
  CHECK(error_code([] { parse_config("mode = analytic\n[physics]\nm = 1\nc = 1\nv0 = 0.5\n[numerics]\nT = 1\n"); }) ==
        ErrorCode::MissingKey);
  CHECK(error_code([] { parse_config("[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 0.5\n[numerics]\nT = 1\n"); }) ==
        ErrorCode::MissingKey);
  // The grid solver needs a source width and a grid.
  std::string no_sigma = kFdtd;
  no_sigma.erase(no_sigma.find("sigma = 0.02\n"), 13);
  CHECK(error_code([&] { parse_config(no_sigma); }) == ErrorCode::MissingKey);
  std::string no_dx = kFdtd;
  no_dx.erase(no_dx.find("dx = 0.004\n"), 11);
  CHECK(error_code([&] { parse_config(no_dx); }) == ErrorCode::MissingKey);
  CHECK(error_code([] {
          parse_config("mode = duhamel\n[physics]\nm = 1\nc = 1\nbeta = 1\nv0 = 0.5\nsigma = 0.02\n[numerics]\nT = 1\n");
        }) == ErrorCode::MissingKey);
}

TEST_CASE("malformed values are type errors") {
  CHECK(error_code([] { parse_config("mode = analytic\n[physics]\nm = one\n"); }) == ErrorCode::TypeError);
  CHECK(error_code([] { parse_config("mode = analytic\n[physics]\nm = 1.0.0\n"); }) == ErrorCode::TypeError);
  CHECK(error_code([] { parse_config("mode = spectral\n"); }) == ErrorCode::TypeError);
  CHECK(error_code([] { parse_config("mode = analytic\njust words\n"); }) != std::nullopt);
}

TEST_CASE("contradictory or out-of-range numerics") {
  std::string both = kFdtd;
  both.insert(both.find("T = 10"), "dt = 0.002\n");
  CHECK(error_code([&] { parse_config(both); }) == ErrorCode::InvalidConfig);
  std::string dup = kFdtd;
  dup.insert(dup.find("c = 1\n"), "m = 2\n");
  CHECK(error_code([&] { parse_config(dup); }) == ErrorCode::InvalidConfig);
  std::string late = kFdtd;
  late.replace(late.find("2.5, 5"), 6, "2.5, 11");
  CHECK(error_code([&] { parse_config(late); }) == ErrorCode::InvalidConfig);
  std::string neg = kFdtd;
  neg.replace(neg.find("dx = 0.004"), 10, "dx = -0.004");
  CHECK(error_code([&] { parse_config(neg); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("physics errors keep their own codes") {
  CHECK(error_code([] { parse_config("mode = analytic\n[physics]\nm = 0\nc = 1\nbeta = 1\nv0 = 0.5\n[numerics]\nT = 1\n"); }) ==
        ErrorCode::NonPositiveMass);
  CHECK(error_code([] { parse_config("mode = analytic\n[physics]\nm = 1\nc = 1\nbeta = 0\nv0 = 0.5\n[numerics]\nT = 1\n"); }) ==
        ErrorCode::ZeroCoupling);
}

TEST_CASE("load_config reads files and reports missing ones") {
  const auto path = std::filesystem::temp_directory_path() / "selfforce_test_config.cfg";
  {
    std::ofstream(path) << kFdtd;
  }
  CHECK(load_config(path.string()) == parse_config(kFdtd));
  std::filesystem::remove(path);
  CHECK(error_code([&] { load_config(path.string()); }) == ErrorCode::IoError);
}
