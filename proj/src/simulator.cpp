#include "swarmctl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "swarmctl/central.hpp"
#include "swarmctl/core.hpp"
#include "swarmctl/errors.hpp"

namespace swarmctl {

namespace {

constexpr double kZetaSlack = 1e-12;
constexpr double kMonotoneSlack = 1e-15;

double inf_error(const ProbabilityVector& p, const ProbabilityVector& target) {
    double e = 0.0;
    for (int i = 0; i < p.dim(); ++i) e = std::max(e, std::abs(p[i] - target[i]));
    return e;
}

double l2_error(const ProbabilityVector& p, const ProbabilityVector& target) {
    double s = 0.0;
    for (int i = 0; i < p.dim(); ++i) {
        const double d = p[i] - target[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Deterministic rounding of fractions to integer counts summing to N
/// (floor everything, then hand out the shortfall by largest remainder).
std::vector<std::int64_t> counts_from_fractions(const ProbabilityVector& p,
                                                std::int64_t n) {
    const int m = p.dim();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(m));
    std::vector<std::pair<double, int>> remainders;
    remainders.reserve(static_cast<std::size_t>(m));
    std::int64_t assigned = 0;
    for (int i = 0; i < m; ++i) {
        const double exact = p[i] * static_cast<double>(n);
        const double fl = std::floor(exact);
        counts[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(fl);
        assigned += counts[static_cast<std::size_t>(i)];
        remainders.emplace_back(exact - fl, i);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::int64_t k = 0; k < n - assigned; ++k)
        ++counts[static_cast<std::size_t>(remainders[static_cast<std::size_t>(k)].second)];
    return counts;
}

ProbabilityVector fractions_of(const std::vector<std::int64_t>& counts, std::int64_t n) {
    std::vector<double> f(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        f[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    return ProbabilityVector(std::move(f));
}

}  // namespace

void ScenarioConfig::validate() const {
    const int m = graph.num_tasks();
    if (initial.dim() != m || target.dim() != m)
        throw std::invalid_argument("ScenarioConfig: state dimensions must match the graph");
    for (int i = 0; i < m; ++i)
        if (!(target[i] > 0.0))
            throw std::invalid_argument("ScenarioConfig: target entry " + std::to_string(i) +
                                        " must be strictly positive");
    if (epochs < 1) throw std::invalid_argument("ScenarioConfig: epochs must be >= 1");
    if (const auto* agents = std::get_if<AgentMode>(&mode)) {
        if (agents->num_agents < 1)
            throw std::invalid_argument("ScenarioConfig: agent count must be >= 1");
    }
    if (const auto* dist = std::get_if<DistributedControl>(&controller))
        dist->params.validate();
}

ProbabilityVector step_meanfield(const ProbabilityVector& p, const StochasticMatrix& K) {
    if (p.dim() != K.dim())
        throw std::invalid_argument("step_meanfield: dimension mismatch");
    const int m = p.dim();
    std::vector<double> next(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        const double w = p[i];
        if (w == 0.0) continue;
        const auto row = K.row(i);
        for (int j = 0; j < m; ++j)
            next[static_cast<std::size_t>(j)] += w * row[static_cast<std::size_t>(j)];
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    if (std::abs(sum - 1.0) > kRowSumTol) {
        std::cerr << "[swarmctl] warning: mean-field state drifted to sum " << sum
                  << "; renormalizing (kernel bug?)\n";
        for (double& v : next) v /= sum;
    }
    return ProbabilityVector(std::move(next));
}

AgentStepResult step_agents(const std::vector<std::int64_t>& counts,
                            const StochasticMatrix& K, std::mt19937_64& rng) {
    const int m = K.dim();
    if (static_cast<int>(counts.size()) != m)
        throw std::invalid_argument("step_agents: dimension mismatch");

    AgentStepResult result;
    result.counts.assign(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
        std::int64_t remaining = counts[static_cast<std::size_t>(i)];
        if (remaining < 0) throw std::invalid_argument("step_agents: negative count");
        if (remaining == 0) continue;

        // Multinomial draw over row i by sequential conditional binomials.
        double prob_left = 1.0;
        std::int64_t stayed = 0;
        for (int j = 0; j < m && remaining > 0; ++j) {
            const double pij = K(i, j);
            std::int64_t drawn;
            if (j == m - 1 || prob_left <= pij) {
                drawn = remaining;
            } else {
                const double cond = std::clamp(pij / prob_left, 0.0, 1.0);
                drawn = std::binomial_distribution<std::int64_t>(remaining, cond)(rng);
            }
            result.counts[static_cast<std::size_t>(j)] += drawn;
            if (j == i) stayed = drawn;
            remaining -= drawn;
            prob_left -= pij;
        }
        result.moved += counts[static_cast<std::size_t>(i)] - stayed;
    }
    return result;
}

double activity_level(const ProbabilityVector& p, const StochasticMatrix& K) {
    if (p.dim() != K.dim())
        throw std::invalid_argument("activity_level: dimension mismatch");
    double a = 0.0;
    for (int i = 0; i < p.dim(); ++i) a += p[i] * (1.0 - K(i, i));
    return a;
}

LyapunovDiagnostics lyapunov_diagnostics(const ProbabilityVector& p_prev,
                                         const ProbabilityVector& p_now,
                                         const ProbabilityVector& p_target) {
    const int m = p_target.dim();
    if (p_prev.dim() != m || p_now.dim() != m)
        throw std::invalid_argument("lyapunov_diagnostics: dimension mismatch");

    LyapunovDiagnostics out;
    out.zeta.resize(static_cast<std::size_t>(m));
    double v_now = 0.0;
    double v_prev = 0.0;
    double expansion = 0.0;
    for (int i = 0; i < m; ++i) {
        const double e_now = p_target[i] - p_now[i];
        const double e_prev = p_target[i] - p_prev[i];
        v_now += e_now * e_now;
        v_prev += e_prev * e_prev;
        expansion += (2.0 * p_target[i] - p_now[i] - p_prev[i]) * (p_prev[i] - p_now[i]);
        out.zeta[static_cast<std::size_t>(i)] = e_now * (e_now - e_prev);
        if (out.zeta[static_cast<std::size_t>(i)] > kZetaSlack) out.sufficient_ok = false;
    }
    out.v = v_now;
    out.delta_v = v_now - v_prev;
    if (std::abs(out.delta_v - expansion) > 1e-12)
        throw Error("lyapunov_diagnostics: direct and expanded delta-V disagree by " +
                    std::to_string(std::abs(out.delta_v - expansion)));
    return out;
}

OscillationReport detect_oscillation(const SimulationTrace& trace, int window, double tol) {
    if (window < 1) throw std::invalid_argument("detect_oscillation: window must be >= 1");
    const std::size_t need = 2 * static_cast<std::size_t>(window);
    if (trace.records.size() < need)
        throw TraceTooShort("detect_oscillation: trace has " +
                            std::to_string(trace.records.size()) + " records, needs " +
                            std::to_string(need));

    const std::size_t begin = trace.records.size() - need;
    bool monotone = true;
    double seg_max = 0.0;
    for (std::size_t i = begin; i < trace.records.size(); ++i) {
        const double e = trace.records[i].error_inf;
        seg_max = std::max(seg_max, e);
        if (i > begin && e > trace.records[i - 1].error_inf + kMonotoneSlack)
            monotone = false;
    }

    const std::size_t tail = trace.records.size() - static_cast<std::size_t>(window);
    double lo = trace.records[tail].error_inf;
    double hi = lo;
    for (std::size_t i = tail; i < trace.records.size(); ++i) {
        lo = std::min(lo, trace.records[i].error_inf);
        hi = std::max(hi, trace.records[i].error_inf);
    }

    OscillationReport report;
    report.amplitude = hi - lo;
    report.oscillating = !monotone && seg_max > tol && report.amplitude > tol;
    return report;
}

SimulationTrace run_scenario(const ScenarioConfig& cfg,
                             const std::function<void(const TraceRecord&)>& on_record) {
    cfg.validate();

    const StochasticMatrix p0_kernel = normalize_adjacency(cfg.graph);
    const StochasticMatrix p_star = synthesize_central(p0_kernel, cfg.target, cfg.synth_tol);

    const auto* dist = std::get_if<DistributedControl>(&cfg.controller);
    const auto* agents = std::get_if<AgentMode>(&cfg.mode);

    SimulationTrace trace;
    trace.records.reserve(static_cast<std::size_t>(cfg.epochs) + 1);

    std::mt19937_64 rng(agents ? agents->seed : 0);
    std::vector<std::int64_t> counts;
    if (agents) counts = counts_from_fractions(cfg.initial, agents->num_agents);

    ProbabilityVector p = agents ? fractions_of(counts, agents->num_agents) : cfg.initial;
    ProbabilityVector shadow = p;  // mean-field twin for noise-isolated feedback

    auto push_record = [&](TraceRecord rec) {
        trace.records.push_back(std::move(rec));
        if (on_record) on_record(trace.records.back());
    };

    {
        TraceRecord rec;
        rec.k = 0;
        rec.p = p.values();
        rec.error_inf = inf_error(p, cfg.target);
        rec.error_l2 = l2_error(p, cfg.target);
        rec.lyapunov = rec.error_l2 * rec.error_l2;
        rec.zeta.assign(static_cast<std::size_t>(p.dim()), 0.0);
        push_record(std::move(rec));
    }

    for (int k = 1; k <= cfg.epochs; ++k) {
        double beta = 0.0;
        StochasticMatrix kernel = [&]() -> StochasticMatrix {
            if (!dist) return p_star;
            const ProbabilityVector& feedback_state =
                (agents && !agents->feedback_from_observed) ? shadow : p;
            FeedbackResult fb = feedback_step(p_star, feedback_state, cfg.target,
                                              dist->params, k);
            beta = fb.diagnostics.beta;
            return std::move(fb.kernel);
        }();

        double activity = 0.0;
        ProbabilityVector p_next = [&] {
            if (agents) {
                AgentStepResult step = step_agents(counts, kernel, rng);
                counts = std::move(step.counts);
                activity = static_cast<double>(step.moved) /
                           static_cast<double>(agents->num_agents);
                if (!agents->feedback_from_observed)
                    shadow = step_meanfield(shadow, kernel);
                return fractions_of(counts, agents->num_agents);
            }
            activity = activity_level(p, kernel);
            return step_meanfield(p, kernel);
        }();

        LyapunovDiagnostics lyap = lyapunov_diagnostics(p, p_next, cfg.target);

        TraceRecord rec;
        rec.k = k;
        rec.p = p_next.values();
        rec.error_inf = inf_error(p_next, cfg.target);
        rec.error_l2 = l2_error(p_next, cfg.target);
        rec.lyapunov = lyap.v;
        rec.delta_v = lyap.delta_v;
        rec.activity = activity;
        rec.beta = beta;
        rec.zeta = std::move(lyap.zeta);
        rec.sufficient_ok = lyap.sufficient_ok;
        push_record(std::move(rec));

        if (cfg.record_kernels) trace.kernels.push_back(kernel);
        p = std::move(p_next);
    }
    return trace;
}

}  // namespace swarmctl
