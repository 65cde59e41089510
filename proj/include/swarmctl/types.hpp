#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace swarmctl {

/// Tolerance for row sums / vector sums of probability data.
inline constexpr double kRowSumTol = 1e-9;

/// Directed task-connectivity graph. Each node is a task; an edge i->j means
/// an agent at task i may hop to task j in one step. Self-loops are mandatory
/// and the digraph must be strongly connected, so every induced kernel is
/// irreducible with positive diagonal.
class TaskGraph {
public:
    /// `edges` is a row-major M*M 0/1 matrix. Throws std::invalid_argument if
    /// a self-loop is missing or the digraph is not strongly connected.
    TaskGraph(int num_tasks, std::vector<std::uint8_t> edges);

    int num_tasks() const noexcept { return num_tasks_; }

    bool edge(int i, int j) const {
        return edges_[static_cast<std::size_t>(i) * num_tasks_ + j] != 0;
    }

    /// Out-degree of node i, counting the self-loop.
    int degree(int i) const;

    const std::vector<std::uint8_t>& edges() const noexcept { return edges_; }

private:
    int num_tasks_;
    std::vector<std::uint8_t> edges_;
};

/// Dense row-stochastic matrix, row-major storage.
class StochasticMatrix {
public:
    /// Validates non-negative entries and unit row sums (within kRowSumTol).
    StochasticMatrix(int dim, std::vector<double> entries);

    static StochasticMatrix identity(int dim);

    int dim() const noexcept { return dim_; }

    double operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * dim_ + j];
    }

    std::span<const double> row(int i) const {
        return {entries_.data() + static_cast<std::size_t>(i) * dim_,
                static_cast<std::size_t>(dim_)};
    }

    const std::vector<double>& entries() const noexcept { return entries_; }

private:
    int dim_;
    std::vector<double> entries_;
};

/// Distribution over tasks: non-negative entries summing to one.
class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> values);

    static ProbabilityVector uniform(int dim);

    /// One-hot vector with all mass at `task`.
    static ProbabilityVector unit(int dim, int task);

    int dim() const noexcept { return static_cast<int>(values_.size()); }

    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

    const std::vector<double>& values() const noexcept { return values_; }

    /// True iff every entry is strictly positive (required of target
    /// distributions).
    bool strictly_positive() const;

private:
    std::vector<double> values_;
};

/// Swarm state: population fractions over tasks, optionally backed by exact
/// agent counts (fractions[i] == counts[i] / N).
struct SwarmState {
    ProbabilityVector fractions;
    std::optional<std::vector<std::int64_t>> agent_counts;

    static SwarmState from_counts(const std::vector<std::int64_t>& counts);
};

}  // namespace swarmctl
