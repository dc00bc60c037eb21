#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace flowcap::cli {

/// Process exit statuses. Operators script against these values.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitModelDivergence = 3,
    kExitFitFailure = 4,
};

enum class Subcommand { Simulate, Sweep, Ingest, Analyze };

struct CommandSpec {
    Subcommand subcommand = Subcommand::Simulate;
    std::optional<std::filesystem::path> config_path;
    std::vector<std::string> overrides; ///< key=value, applied after the file
    std::filesystem::path output_dir = ".";

    // sweep
    std::vector<double> lambdas;

    // ingest
    std::vector<std::filesystem::path> inputs;
    std::optional<std::string> listen;
    std::optional<double> capacity;
    double interval = 1800.0;
    std::vector<unsigned> interfaces;
    std::string direction = "both";
    bool sampling_correction = false;
    std::size_t lateness_intervals = 1;
    std::optional<std::size_t> max_datagrams;
    std::optional<double> listen_seconds;

    // analyze
    std::optional<std::filesystem::path> samples;
};

// Output file names inside CommandSpec::output_dir.
inline constexpr const char* kSamplesFile = "samples.csv";
inline constexpr const char* kMetadataFile = "samples.meta";
inline constexpr const char* kMomentsFile = "moments.json";
inline constexpr const char* kSweepFile = "sweep.csv";
inline constexpr const char* kSweepPointsFile = "sweep_points.csv";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kLabeledSamplesFile = "samples_labeled.csv";
inline constexpr const char* kFittedLinesFile = "fitted_lines.csv";

int run_simulate(const CommandSpec& spec, std::ostream& out, std::ostream& err);
int run_sweep(const CommandSpec& spec, std::ostream& out, std::ostream& err);
int run_ingest(const CommandSpec& spec, std::ostream& out, std::ostream& err);
int run_analyze(const CommandSpec& spec, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace flowcap::cli
