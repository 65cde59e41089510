#include "swarmctl/config.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>

#include "swarmctl/core.hpp"

namespace swarmctl {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& section, const char* field) {
    if (!j.contains(field))
        throw ConfigError(section + "." + field + ": missing required field");
    return j.at(field);
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

int int_at(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return j.get<int>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

TaskGraph parse_graph(const json& j) {
    if (j.contains("grid")) {
        const json& grid = j.at("grid");
        return build_moore_grid(int_at(require(grid, "graph.grid", "rows"), "graph.grid.rows"),
                                int_at(require(grid, "graph.grid", "cols"), "graph.grid.cols"));
    }
    if (j.contains("edges")) return graph_from_json(j);
    throw ConfigError("graph: expected either grid dimensions or an explicit edge matrix");
}

ProbabilityVector parse_distribution(const json& j, int m, const std::string& section,
                                     bool must_be_positive) {
    ProbabilityVector out = [&] {
        if (j.contains("task"))
            return ProbabilityVector::unit(m, int_at(j.at("task"), section + ".task"));
        if (j.contains("uniform")) return ProbabilityVector::uniform(m);
        if (j.contains("counts")) {
            const json& c = j.at("counts");
            if (!c.is_array()) throw ConfigError(section + ".counts: expected an array");
            std::vector<std::int64_t> counts;
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (!c[i].is_number_integer())
                    throw ConfigError(section + ".counts[" + std::to_string(i) +
                                      "]: expected an integer");
                counts.push_back(c[i].get<std::int64_t>());
            }
            return SwarmState::from_counts(counts).fractions;
        }
        if (j.contains("fractions")) {
            try {
                return ProbabilityVector(
                    number_list(j.at("fractions"), section + ".fractions"));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(section + ".fractions: " + e.what());
            }
        }
        throw ConfigError(section + ": expected task, uniform, fractions, or counts");
    }();
    if (out.dim() != m)
        throw ConfigError(section + ": dimension " + std::to_string(out.dim()) +
                          " does not match the graph (" + std::to_string(m) + " tasks)");
    if (must_be_positive) {
        for (int i = 0; i < out.dim(); ++i)
            if (!(out[i] > 0.0))
                throw ConfigError(section + ": entry " + std::to_string(i) +
                                  " must be strictly positive");
    }
    return out;
}

BetaSchedule parse_schedule(const json& j) {
    const std::string kind = require(j, "controller.beta", "kind").get<std::string>();
    const double gamma = number_at(require(j, "controller.beta", "gamma"),
                                   "controller.beta.gamma");
    if (kind == "constant") return BetaSchedule::constant(gamma);
    if (kind == "inverse_k") return BetaSchedule::inverse_k(gamma);
    if (kind == "exponential")
        return BetaSchedule::exponential(
            gamma, number_at(require(j, "controller.beta", "decay_horizon"),
                             "controller.beta.decay_horizon"));
    throw ConfigError("controller.beta.kind: unknown kind '" + kind +
                      "' (constant | inverse_k | exponential)");
}

Controller parse_controller(const json& j) {
    const std::string type = require(j, "controller", "type").get<std::string>();
    if (type == "central") return CentralControl{};
    if (type == "distributed") {
        DistributedControl d;
        d.params.schedule = parse_schedule(require(j, "controller", "beta"));
        if (j.contains("theta")) d.params.theta = number_at(j.at("theta"), "controller.theta");
        if (j.contains("lambda"))
            d.params.lambda = number_at(j.at("lambda"), "controller.lambda");
        if (j.contains("measure_tol"))
            d.params.measure_tol = number_at(j.at("measure_tol"), "controller.measure_tol");
        if (j.contains("measure_max_iter"))
            d.params.measure_max_iter =
                int_at(j.at("measure_max_iter"), "controller.measure_max_iter");
        try {
            d.params.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("controller: ") + e.what());
        }
        return d;
    }
    throw ConfigError("controller.type: unknown type '" + type +
                      "' (central | distributed)");
}

void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

LoadedScenario load_scenario(const json& doc) {
    if (!doc.is_object()) throw ConfigError("scenario: expected a JSON object");

    TaskGraph graph = parse_graph(require(doc, "scenario", "graph"));
    const int m = graph.num_tasks();

    ProbabilityVector initial =
        parse_distribution(require(doc, "scenario", "initial"), m, "initial", false);
    ProbabilityVector target =
        parse_distribution(require(doc, "scenario", "target"), m, "target", true);
    Controller controller = parse_controller(require(doc, "scenario", "controller"));

    const json& run = require(doc, "scenario", "run");
    const int epochs = int_at(require(run, "run", "epochs"), "run.epochs");
    if (epochs < 1) throw ConfigError("run.epochs: must be >= 1");

    SimulationMode mode = MeanFieldMode{};
    const std::string mode_name =
        run.contains("mode") ? run.at("mode").get<std::string>() : "meanfield";
    if (mode_name == "agents") {
        AgentMode agents;
        agents.seed = run.contains("seed") ? run.at("seed").get<std::uint64_t>()
                                           : kDefaultSeed;
        if (run.contains("agents")) {
            agents.num_agents = run.at("agents").get<std::int64_t>();
        } else if (doc.at("initial").contains("counts")) {
            std::int64_t total = 0;
            for (const auto& c : doc.at("initial").at("counts"))
                total += c.get<std::int64_t>();
            agents.num_agents = total;
        } else {
            throw ConfigError("run.agents: agent mode needs an agent count "
                              "(run.agents or initial.counts)");
        }
        if (agents.num_agents < 1) throw ConfigError("run.agents: must be >= 1");
        if (run.contains("feedback")) {
            const std::string fb = run.at("feedback").get<std::string>();
            if (fb == "observed")
                agents.feedback_from_observed = true;
            else if (fb == "meanfield")
                agents.feedback_from_observed = false;
            else
                throw ConfigError("run.feedback: expected 'observed' or 'meanfield'");
        }
        mode = agents;
    } else if (mode_name != "meanfield") {
        throw ConfigError("run.mode: unknown mode '" + mode_name +
                          "' (meanfield | agents)");
    }

    ScenarioConfig scenario{std::move(graph), std::move(initial), std::move(target),
                            std::move(controller), epochs, mode};
    if (run.contains("synth_tol"))
        scenario.synth_tol = number_at(run.at("synth_tol"), "run.synth_tol");
    if (run.contains("record_kernels"))
        scenario.record_kernels = run.at("record_kernels").get<bool>();

    OutputOptions output;
    if (doc.contains("output")) {
        const json& out = doc.at("output");
        if (out.contains("csv")) output.csv_path = out.at("csv").get<std::string>();
        if (out.contains("per_state_columns"))
            output.per_state_columns = out.at("per_state_columns").get<bool>();
    }

    try {
        scenario.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return LoadedScenario{std::move(scenario), std::move(output)};
}

LoadedScenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return load_scenario(doc);
}

json graph_to_json(const TaskGraph& g) {
    const int m = g.num_tasks();
    json rows = json::array();
    for (int i = 0; i < m; ++i) {
        json row = json::array();
        for (int j = 0; j < m; ++j) row.push_back(g.edge(i, j) ? 1 : 0);
        rows.push_back(std::move(row));
    }
    return json{{"num_tasks", m}, {"edges", std::move(rows)}};
}

TaskGraph graph_from_json(const json& j) {
    const int m = int_at(require(j, "graph", "num_tasks"), "graph.num_tasks");
    const json& rows = require(j, "graph", "edges");
    if (!rows.is_array() || static_cast<int>(rows.size()) != m)
        throw ConfigError("graph.edges: expected " + std::to_string(m) + " rows");
    std::vector<std::uint8_t> edges;
    edges.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != m)
            throw ConfigError("graph.edges[" + std::to_string(i) + "]: expected " +
                              std::to_string(m) + " entries");
        for (int k = 0; k < m; ++k)
            edges.push_back(row[static_cast<std::size_t>(k)].get<int>() != 0 ? 1 : 0);
    }
    try {
        return TaskGraph(m, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("graph: ") + e.what());
    }
}

json matrix_to_json(const StochasticMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"dim", m.dim()}, {"entries", std::move(rows)}};
}

StochasticMatrix matrix_from_json(const json& j) {
    const int m = int_at(require(j, "matrix", "dim"), "matrix.dim");
    const json& rows = require(j, "matrix", "entries");
    if (!rows.is_array() || static_cast<int>(rows.size()) != m)
        throw ConfigError("matrix.entries: expected " + std::to_string(m) + " rows");
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        std::vector<double> row =
            number_list(rows[static_cast<std::size_t>(i)],
                        "matrix.entries[" + std::to_string(i) + "]");
        if (static_cast<int>(row.size()) != m)
            throw ConfigError("matrix.entries[" + std::to_string(i) + "]: expected " +
                              std::to_string(m) + " entries");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    try {
        return StochasticMatrix(m, std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("matrix: ") + e.what());
    }
}

std::string csv_header(int num_tasks, bool per_state_columns) {
    std::string h = "k,error_inf,error_l2,V,delta_V,activity,beta,sufficient_ok";
    if (per_state_columns)
        for (int i = 0; i < num_tasks; ++i) h += ",p_" + std::to_string(i);
    h += '\n';
    return h;
}

std::string csv_row(const TraceRecord& rec, bool per_state_columns) {
    std::string line = std::to_string(rec.k);
    for (double v : {rec.error_inf, rec.error_l2, rec.lyapunov, rec.delta_v,
                     rec.activity, rec.beta}) {
        line += ',';
        append_double(line, v);
    }
    line += rec.sufficient_ok ? ",1" : ",0";
    if (per_state_columns) {
        for (double v : rec.p) {
            line += ',';
            append_double(line, v);
        }
    }
    line += '\n';
    return line;
}

std::string trace_to_csv(const SimulationTrace& trace, bool per_state_columns) {
    std::string out;
    const int m = trace.records.empty() ? 0
                                        : static_cast<int>(trace.records.front().p.size());
    out += csv_header(m, per_state_columns);
    for (const TraceRecord& rec : trace.records) out += csv_row(rec, per_state_columns);
    return out;
}

}  // namespace swarmctl
