#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "swarmctl/simulator.hpp"
#include "swarmctl/types.hpp"

namespace swarmctl {

/// Default RNG seed for agent-mode runs, so repeat runs of the shipped
/// scenario files are reproducible without any flags.
inline constexpr std::uint64_t kDefaultSeed = 1729;

/// A scenario file failed to parse or describes an invalid scenario. The
/// message carries the offending section/field (and byte position for syntax
/// errors).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    std::string csv_path;            // empty: stdout summary only
    bool per_state_columns = false;  // append p_0..p_{M-1} to each CSV row
};

struct LoadedScenario {
    ScenarioConfig scenario;
    OutputOptions output;
};

/// Parses a scenario document with sections graph / initial / target /
/// controller / run / output. Throws ConfigError naming the bad field.
LoadedScenario load_scenario(const nlohmann::json& doc);
LoadedScenario load_scenario_file(const std::filesystem::path& path);

nlohmann::json graph_to_json(const TaskGraph& g);
TaskGraph graph_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const StochasticMatrix& m);
StochasticMatrix matrix_from_json(const nlohmann::json& j);

/// CSV header for an M-task trace:
/// k,error_inf,error_l2,V,delta_V,activity,beta,sufficient_ok[,p_0..p_{M-1}]
std::string csv_header(int num_tasks, bool per_state_columns);

/// One CSV row; doubles use the shortest representation that parses back to
/// the identical value, so equal traces give byte-equal files.
std::string csv_row(const TraceRecord& rec, bool per_state_columns);

std::string trace_to_csv(const SimulationTrace& trace, bool per_state_columns);

}  // namespace swarmctl
