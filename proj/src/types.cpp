#include "swarmctl/types.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "swarmctl/graph_search.hpp"

namespace swarmctl {

TaskGraph::TaskGraph(int num_tasks, std::vector<std::uint8_t> edges)
    : num_tasks_(num_tasks), edges_(std::move(edges)) {
    if (num_tasks_ < 1)
        throw std::invalid_argument("TaskGraph: num_tasks must be >= 1");
    if (edges_.size() != static_cast<std::size_t>(num_tasks_) * num_tasks_)
        throw std::invalid_argument("TaskGraph: edge matrix must be M x M");
    for (int i = 0; i < num_tasks_; ++i) {
        if (!edge(i, i))
            throw std::invalid_argument("TaskGraph: missing self-loop at task " +
                                        std::to_string(i));
    }
    if (!strongly_connected(num_tasks_, [this](int i, int j) { return edge(i, j); }))
        throw std::invalid_argument("TaskGraph: digraph is not strongly connected");
}

int TaskGraph::degree(int i) const {
    int d = 0;
    for (int j = 0; j < num_tasks_; ++j)
        if (edge(i, j)) ++d;
    return d;
}

StochasticMatrix::StochasticMatrix(int dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ < 1) throw std::invalid_argument("StochasticMatrix: dim must be >= 1");
    if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
        throw std::invalid_argument("StochasticMatrix: entries must be dim x dim");
    for (int i = 0; i < dim_; ++i) {
        double sum = 0.0;
        for (int j = 0; j < dim_; ++j) {
            const double e = (*this)(i, j);
            // Allow one ulp of headroom above 1 from the gain transform.
            if (!(e >= 0.0) || e > 1.0 + 1e-12)
                throw std::invalid_argument("StochasticMatrix: entry (" +
                                            std::to_string(i) + "," + std::to_string(j) +
                                            ") outside [0, 1]");
            sum += e;
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
            throw std::invalid_argument("StochasticMatrix: row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum));
    }
}

StochasticMatrix StochasticMatrix::identity(int dim) {
    std::vector<double> e(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i) * dim + i] = 1.0;
    return {dim, std::move(e)};
}

ProbabilityVector::ProbabilityVector(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("ProbabilityVector: dim must be >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0))
            throw std::invalid_argument("ProbabilityVector: negative entry at index " +
                                        std::to_string(i));
        sum += values_[i];
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
        throw std::invalid_argument("ProbabilityVector: entries sum to " +
                                    std::to_string(sum));
}

ProbabilityVector ProbabilityVector::uniform(int dim) {
    return ProbabilityVector(std::vector<double>(static_cast<std::size_t>(dim),
                                                 1.0 / static_cast<double>(dim)));
}

ProbabilityVector ProbabilityVector::unit(int dim, int task) {
    if (task < 0 || task >= dim)
        throw std::invalid_argument("ProbabilityVector::unit: task index out of range");
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    v[static_cast<std::size_t>(task)] = 1.0;
    return ProbabilityVector(std::move(v));
}

bool ProbabilityVector::strictly_positive() const {
    for (double v : values_)
        if (!(v > 0.0)) return false;
    return true;
}

SwarmState SwarmState::from_counts(const std::vector<std::int64_t>& counts) {
    const std::int64_t total = std::accumulate(counts.begin(), counts.end(),
                                               std::int64_t{0});
    if (total <= 0)
        throw std::invalid_argument("SwarmState: total agent count must be positive");
    std::vector<double> fractions(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < 0)
            throw std::invalid_argument("SwarmState: negative agent count");
        fractions[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return SwarmState{ProbabilityVector(std::move(fractions)), counts};
}

}  // namespace swarmctl
