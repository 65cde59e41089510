// Command-line front end: kernel synthesis, scenario simulation, and grid
// generation. Exit codes: 0 success, 2 bad input/config, 3 numeric failure.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "swarmctl/central.hpp"
#include "swarmctl/config.hpp"
#include "swarmctl/core.hpp"
#include "swarmctl/errors.hpp"
#include "swarmctl/simulator.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNumeric = 3;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw swarmctl::ConfigError("cannot open output file: " + path);
    out << text;
    if (!out) throw swarmctl::ConfigError("failed writing output file: " + path);
}

struct SimulateOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string mode;  // "", "meanfield", or "agents:N"
};

swarmctl::LoadedScenario load_with_overrides(const SimulateOptions& opt) {
    swarmctl::LoadedScenario loaded = swarmctl::load_scenario_file(opt.config_path);
    if (!opt.mode.empty()) {
        if (opt.mode == "meanfield") {
            loaded.scenario.mode = swarmctl::MeanFieldMode{};
        } else if (opt.mode.rfind("agents:", 0) == 0) {
            swarmctl::AgentMode agents;
            if (const auto* prev =
                    std::get_if<swarmctl::AgentMode>(&loaded.scenario.mode))
                agents = *prev;
            try {
                agents.num_agents = std::stoll(opt.mode.substr(7));
            } catch (const std::exception&) {
                throw swarmctl::ConfigError("--mode agents:N requires an integer N");
            }
            if (agents.num_agents < 1)
                throw swarmctl::ConfigError("--mode agents:N requires N >= 1");
            if (agents.seed == 0) agents.seed = swarmctl::kDefaultSeed;
            loaded.scenario.mode = agents;
        } else {
            throw swarmctl::ConfigError("--mode expects 'meanfield' or 'agents:N'");
        }
    }
    if (opt.seed) {
        if (auto* agents = std::get_if<swarmctl::AgentMode>(&loaded.scenario.mode))
            agents->seed = *opt.seed;
    }
    if (!opt.out_path.empty()) loaded.output.csv_path = opt.out_path;
    return loaded;
}

int cmd_grid(int rows, int cols, const std::string& out_path) {
    const swarmctl::TaskGraph graph = swarmctl::build_moore_grid(rows, cols);
    const swarmctl::StochasticMatrix kernel = swarmctl::normalize_adjacency(graph);
    json doc{{"graph", swarmctl::graph_to_json(graph)},
             {"kernel", swarmctl::matrix_to_json(kernel)}};
    write_text(out_path, doc.dump(2) + "\n");
    return kExitOk;
}

/// Modulus of the second-largest eigenvalue: an advisory mixing-speed
/// diagnostic for picking feedback rates, never an enforced bound.
double second_eigenvalue_modulus(const swarmctl::StochasticMatrix& m) {
    if (m.dim() < 2) return 0.0;
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> mapped(m.entries().data(), m.dim(), m.dim());
    Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(mapped), false);
    std::vector<double> moduli(static_cast<std::size_t>(m.dim()));
    for (int i = 0; i < m.dim(); ++i) moduli[static_cast<std::size_t>(i)] =
        std::abs(solver.eigenvalues()(i));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    return moduli[1];
}

int cmd_synthesize(const std::string& config_path, const std::string& out_path,
                   const std::string& gain_source) {
    const swarmctl::LoadedScenario loaded = swarmctl::load_scenario_file(config_path);
    const swarmctl::StochasticMatrix p0 =
        swarmctl::normalize_adjacency(loaded.scenario.graph);
    const swarmctl::ProbabilityVector& target = loaded.scenario.target;

    swarmctl::ProbabilityVector source =
        gain_source == "initial" ? loaded.scenario.initial
                                 : swarmctl::stationary_distribution(p0);
    if (gain_source == "initial" && !source.strictly_positive())
        throw swarmctl::ConfigError(
            "initial: --gain-source=initial needs a strictly positive initial "
            "distribution");

    const std::vector<double> gain =
        p0.dim() == 1 ? std::vector<double>{1.0}
                      : swarmctl::gain_from_distributions(source, target).values();
    const swarmctl::StochasticMatrix p_star =
        gain_source == "initial"
            ? swarmctl::synthesize_from_source(p0, source, target)
            : swarmctl::synthesize_central(p0, target, loaded.scenario.synth_tol);

    const swarmctl::ProbabilityVector pi_star = swarmctl::stationary_distribution(p_star);
    double stationary_error = 0.0;
    for (int i = 0; i < p_star.dim(); ++i)
        stationary_error = std::max(stationary_error, std::abs(pi_star[i] - target[i]));

    json doc{{"p_star", swarmctl::matrix_to_json(p_star)},
             {"gain", gain},
             {"gain_source", gain_source},
             {"stationary_residual", stationary_error},
             {"fixed_point_residual", swarmctl::stationary_residual(pi_star, p_star)},
             {"sparsity_ok", swarmctl::check_sparsity_match(p_star, p0)},
             {"second_eigenvalue_modulus", second_eigenvalue_modulus(p_star)}};
    write_text(out_path, doc.dump(2) + "\n");
    return kExitOk;
}

int cmd_simulate(const SimulateOptions& opt) {
    const swarmctl::LoadedScenario loaded = load_with_overrides(opt);
    const int m = loaded.scenario.graph.num_tasks();

    std::ofstream csv;
    if (!loaded.output.csv_path.empty()) {
        csv.open(loaded.output.csv_path, std::ios::binary);
        if (!csv)
            throw swarmctl::ConfigError("cannot open output file: " +
                                        loaded.output.csv_path);
        csv << swarmctl::csv_header(m, loaded.output.per_state_columns);
    }
    auto on_record = [&](const swarmctl::TraceRecord& rec) {
        if (csv.is_open()) csv << swarmctl::csv_row(rec, loaded.output.per_state_columns);
    };

    swarmctl::SimulationTrace trace;
    try {
        trace = swarmctl::run_scenario(loaded.scenario, on_record);
    } catch (...) {
        if (csv.is_open()) csv.flush();  // keep the partial trace
        throw;
    }

    const swarmctl::TraceRecord& last = trace.records.back();
    std::string oscillating = "n/a";
    try {
        oscillating = swarmctl::detect_oscillation(trace).oscillating ? "true" : "false";
    } catch (const swarmctl::TraceTooShort&) {
    }
    std::cout << "epochs=" << last.k << " final_error_inf=" << last.error_inf
              << " final_activity=" << last.activity << " oscillating=" << oscillating
              << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Swarm distribution control: Markov kernel synthesis and simulation"};
    app.require_subcommand(1);

    int rows = 0;
    int cols = 0;
    std::string grid_out;
    CLI::App* grid = app.add_subcommand("grid", "Emit a Moore grid graph and its kernel");
    grid->add_option("rows", rows, "grid rows")->required()->check(CLI::PositiveNumber);
    grid->add_option("cols", cols, "grid cols")->required()->check(CLI::PositiveNumber);
    grid->add_option("--out", grid_out, "output path (default stdout)");

    std::string synth_config;
    std::string synth_out;
    std::string gain_source = "stationary";
    CLI::App* synth =
        app.add_subcommand("synthesize", "Synthesize the broadcast kernel for a scenario");
    synth->add_option("--config", synth_config, "scenario file")->required();
    synth->add_option("--out", synth_out, "output path (default stdout)");
    synth->add_option("--gain-source", gain_source,
                      "gain source distribution: stationary (guaranteed) or initial "
                      "(literal closed form, no stationary guarantee)")
        ->check(CLI::IsMember({"stationary", "initial"}));

    SimulateOptions sim;
    std::uint64_t seed_value = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "Run a scenario and write its trace");
    simulate->add_option("--config", sim.config_path, "scenario file")->required();
    simulate->add_option("--out", sim.out_path, "trace CSV path (overrides config)");
    CLI::Option* seed_opt =
        simulate->add_option("--seed", seed_value, "agent-mode RNG seed (overrides config)");
    simulate->add_option("--mode", sim.mode, "meanfield or agents:N (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (grid->parsed()) return cmd_grid(rows, cols, grid_out);
        if (synth->parsed()) return cmd_synthesize(synth_config, synth_out, gain_source);
        if (seed_opt->count() > 0) sim.seed = seed_value;
        return cmd_simulate(sim);
    } catch (const swarmctl::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const swarmctl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
