// selfforce <analytic|duhamel|fdtd|verify> --config <path> [--out <dir>]
//
// Exit status: 0 success, 1 a verification criterion failed, 2 error.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "selfforce/config.hpp"
#include "selfforce/runner.hpp"

int main(int argc, char** argv) {
  using namespace selfforce;

  CLI::App app{"Self-interacting particle in a 1D scalar field: point-source solution, regularized quadrature, "
               "grid solver and verification suite."};
  std::string mode;
  std::string config_path;
  std::string out_dir;
  app.add_option("mode", mode, "analytic | duhamel | fdtd | verify")
      ->required()
      ->check(CLI::IsMember({"analytic", "duhamel", "fdtd", "verify"}));
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides paths.output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const config::RunConfig cfg = config::load_config(config_path);
    if (config::to_string(cfg.mode) != mode) {
      throw Error(ErrorCode::InvalidConfig, "command line asks for mode " + mode + " but the config sets mode = " +
                                                std::string(config::to_string(cfg.mode)));
    }
    if (out_dir.empty()) out_dir = cfg.output_dir.value_or(runner::kDefaultOutputDir);
    return runner::run(cfg, out_dir, std::cout);
  } catch (const Error& e) {
    std::cerr << "selfforce: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "selfforce: unexpected failure: " << e.what() << '\n';
    return 2;
  }
}
