#pragma once
// Experiment runner behind the `cayperc` command line tool.
//
// A run reads a flat key=value config, calls one module operation per
// reported statistic and writes <experiment>.csv, <experiment>.json and
// <experiment>.dat into the output directory. Wall time goes to a separate
// <experiment>.timing.json so the other three files are reproducible byte for
// byte.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cayperc/keyvalue.hpp"

namespace cayperc {

inline constexpr const char* kVersion = "0.1.0";

/// Experiment names accepted by run().
const std::vector<std::string>& experiment_names();

/// Config keys accepted for an experiment (presentation keys included).
std::vector<std::string> experiment_keys(const std::string& experiment);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;     // overrides the `seed` config key
  std::optional<std::size_t> threads;    // overrides CAYPERC_THREADS for this run
};

enum class ExitCode : int { Ok = 0, ModuleError = 1, InvalidConfig = 2 };

struct RunResult {
  ExitCode code = ExitCode::Ok;
  std::string message;                   // error text when code != Ok
  std::vector<std::filesystem::path> files;
};

RunResult run(const std::string& experiment, const KeyValueText& config,
              const RunOptions& options = {});

/// Whitespace-separated columns, one curve per file.
struct PlotData {
  std::string title;
  std::vector<std::string> columns;      // "name: meaning"
  std::vector<std::vector<double>> rows;
};

/// Writes the header comment and the rows sorted by the first column.
void emit_plotdata(const std::filesystem::path& path, PlotData data);

}  // namespace cayperc
