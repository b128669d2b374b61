#pragma once

// Command-line front end: argument parsing into a Command, CSV formatting of
// experiment results, and the subcommand dispatcher used by the binary.
//
// Exit codes: 0 success, 1 runtime failure (I/O, invalid scenario content),
// 2 usage error (unknown flags or values).

#include <string>
#include <vector>

#include "backhaul/experiments.hpp"

namespace backhaul {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when --help is requested; carries the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Subcommand { Allocate, Msweep, Failure, Route, Validate };

struct Command {
    Subcommand subcommand = Subcommand::Allocate;
    std::string scenario_path = "builtin";
    std::string output_path;     // CSV destination; empty keeps stdout only
    std::string normalize_path;  // validate --normalize target
    ScenarioConfig config;       // fully resolved: file, env and flags applied
};

// Parses arguments (program name excluded) into a resolved Command.
// Resolution order for every knob: built-in default, then BACKHAUL_SEED (seed
// only), then the scenario file, then explicit flags. Throws UsageError on
// unknown flags/values and HelpRequested for --help.
Command parse_args(const std::vector<std::string>& args);

// "p1" -> {8 Mbps, 30 ms}, "p2" -> {30 Mbps, 50 ms}; UsageError otherwise.
QosProfile profile_from_name(const std::string& name);

// "4" -> {4}; "0:8" -> {0,1,...,8}; "0:8:2" -> {0,2,4,6,8}. UsageError on
// malformed input or a step that never reaches the end.
std::vector<double> parse_m_spec(const std::string& spec);

// CSV renderings (6 significant digits, one link per row in id order).
std::string format_allocation_csv(const Topology& topo, const TrialStats& stats);
std::string format_sweep_csv(const std::vector<SweepPoint>& points);

// Writes text to path; IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

// Executes a parsed command; returns a process exit code.
int run_command(const Command& cmd);

// Full entry point: parse, dispatch, map exceptions to exit codes.
int cli_main(int argc, const char* const* argv);

}  // namespace backhaul
