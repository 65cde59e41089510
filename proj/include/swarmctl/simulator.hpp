#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <variant>
#include <vector>

#include "swarmctl/measure.hpp"
#include "swarmctl/types.hpp"

namespace swarmctl {

struct CentralControl {};

struct DistributedControl {
    FeedbackParams params;
};

using Controller = std::variant<CentralControl, DistributedControl>;

struct MeanFieldMode {};

/// Finite-population mode: N agents sampled per epoch. In the distributed
/// controller the feedback normally reads the observed empirical fractions;
/// `feedback_from_observed = false` drives it from a mean-field shadow state
/// instead, which isolates sampling noise from feedback noise.
struct AgentMode {
    std::int64_t num_agents = 0;
    std::uint64_t seed = 0;
    bool feedback_from_observed = true;
};

using SimulationMode = std::variant<MeanFieldMode, AgentMode>;

struct ScenarioConfig {
    TaskGraph graph;
    ProbabilityVector initial;
    ProbabilityVector target;
    Controller controller = CentralControl{};
    int epochs = 1;
    SimulationMode mode = MeanFieldMode{};
    double synth_tol = 1e-8;
    bool record_kernels = false;  // keep the per-epoch kernels in the trace

    void validate() const;
};

/// One epoch of a run. Row 0 is the initial state (no kernel applied; beta
/// and activity are 0 there). For k >= 1 the record is taken after applying
/// the epoch-k kernel: activity measures the k-1 -> k step.
struct TraceRecord {
    int k = 0;
    std::vector<double> p;
    double error_inf = 0.0;
    double error_l2 = 0.0;
    double lyapunov = 0.0;
    double delta_v = 0.0;
    double activity = 0.0;
    double beta = 0.0;
    std::vector<double> zeta;  // e_i^[k] * (e_i^[k] - e_i^[k-1])
    bool sufficient_ok = true;
};

struct SimulationTrace {
    std::vector<TraceRecord> records;
    std::vector<StochasticMatrix> kernels;  // filled when record_kernels is set
};

/// Deterministic propagation of fractions: p K as a row vector. Drift of the
/// sum beyond kRowSumTol signals a kernel bug; it is renormalized and logged.
ProbabilityVector step_meanfield(const ProbabilityVector& p, const StochasticMatrix& K);

struct AgentStepResult {
    std::vector<std::int64_t> counts;
    std::int64_t moved = 0;  // agents whose sampled next task differs
};

/// Multinomial propagation of agent counts: agents at task i draw next tasks
/// from row i of K. Total count is conserved; fixed rng state gives an
/// identical result.
AgentStepResult step_agents(const std::vector<std::int64_t>& counts,
                            const StochasticMatrix& K, std::mt19937_64& rng);

/// Expected fraction of agents that change task in one step of K from p:
/// sum_i p_i (1 - K_ii).
double activity_level(const ProbabilityVector& p, const StochasticMatrix& K);

struct LyapunovDiagnostics {
    double v = 0.0;        // sum of squared errors at p_now
    double delta_v = 0.0;  // v(p_now) - v(p_prev)
    std::vector<double> zeta;
    bool sufficient_ok = true;  // all zeta_i <= slack
};

/// Lyapunov candidate V = sum (target_i - p_i)^2, its per-step change
/// (computed both directly and through the expanded product form, which must
/// agree to 1e-12), and the per-state sufficient-condition sequence
/// zeta_i = e_i * delta e_i.
LyapunovDiagnostics lyapunov_diagnostics(const ProbabilityVector& p_prev,
                                         const ProbabilityVector& p_now,
                                         const ProbabilityVector& p_target);

struct OscillationReport {
    bool oscillating = false;
    double amplitude = 0.0;  // max - min of error_inf over the trailing window
};

/// Looks at the last 2*window error_inf values: flags oscillation when the
/// segment neither decreases monotonically nor stays below tol, and the
/// trailing window's max - min exceeds tol. Throws TraceTooShort when fewer
/// than 2*window records exist.
OscillationReport detect_oscillation(const SimulationTrace& trace, int window = 50,
                                     double tol = 1e-3);

/// Full scenario run: normalize the graph, synthesize the broadcast kernel,
/// then per epoch either apply it (central) or perturb it from local feedback
/// (distributed), in mean-field or agent mode. `on_record` (optional) fires
/// after each record, so partial traces survive an abort.
SimulationTrace run_scenario(const ScenarioConfig& cfg,
                             const std::function<void(const TraceRecord&)>& on_record = {});

}  // namespace swarmctl
