// cayperc <experiment> --config <file> [--seed N] [--out DIR] [--threads N]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cayperc/error.hpp"
#include "cayperc/harness.hpp"
#include "cayperc/keyvalue.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Percolation, spanning forest and spectral experiments on Cayley graphs"};
  app.set_version_flag("--version", cayperc::kVersion);

  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out_dir = ".";
  app.add_option("experiment", experiment,
                 fmt::format("one of: {}", fmt::join(cayperc::experiment_names(), ", ")))
      ->required();
  app.add_option("--config", config_path, "key = value config file")->required();
  app.add_option("--seed", seed, "master seed, overrides the config");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads, overrides CAYPERC_THREADS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(cayperc::ExitCode::InvalidConfig);
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return static_cast<int>(cayperc::ExitCode::InvalidConfig);
  }
  std::stringstream text;
  text << in.rdbuf();

  cayperc::KeyValueText config;
  try {
    config = cayperc::KeyValueText::parse(text.str());
  } catch (const cayperc::Error& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << "\n";
    return static_cast<int>(cayperc::ExitCode::InvalidConfig);
  }

  cayperc::RunOptions options;
  options.out_dir = out_dir;
  options.seed = seed;
  options.threads = threads;
  const auto result = cayperc::run(experiment, config, options);
  switch (result.code) {
    case cayperc::ExitCode::Ok:
      for (const auto& f : result.files) std::cout << f.string() << "\n";
      break;
    case cayperc::ExitCode::InvalidConfig:
      std::cerr << "error: invalid config: " << result.message << "\n";
      break;
    case cayperc::ExitCode::ModuleError:
      std::cerr << "error: " << result.message << "\n";
      break;
  }
  return static_cast<int>(result.code);
}
