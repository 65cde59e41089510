#include "swarmctl/core.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "swarmctl/errors.hpp"
#include "swarmctl/graph_search.hpp"

namespace swarmctl {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double fixed_point_residual(const std::vector<double>& pi, const StochasticMatrix& P) {
    const int m = P.dim();
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += pi[static_cast<std::size_t>(i)] * P(i, j);
        worst = std::max(worst, std::abs(acc - pi[static_cast<std::size_t>(j)]));
    }
    return worst;
}

/// Damped power iteration on Q = (P + I)/2; the damping removes
/// periodicity so the iteration converges for every irreducible P.
bool power_iterate(const StochasticMatrix& P, double tol, int max_iter,
                   std::vector<double>& pi) {
    const int m = P.dim();
    std::vector<double> next(static_cast<std::size_t>(m));
    pi.assign(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
    for (int iter = 0; iter < max_iter; ++iter) {
        for (int j = 0; j < m; ++j) next[static_cast<std::size_t>(j)] = 0.0;
        for (int i = 0; i < m; ++i) {
            const double w = pi[static_cast<std::size_t>(i)];
            const auto row = P.row(i);
            for (int j = 0; j < m; ++j)
                next[static_cast<std::size_t>(j)] += 0.5 * w * row[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(i)] += 0.5 * w;
        }
        double sum = 0.0;
        for (double v : next) sum += v;
        for (double& v : next) v /= sum;
        pi.swap(next);
        if (fixed_point_residual(pi, P) <= tol) return true;
    }
    return false;
}

}  // namespace

TaskGraph build_moore_grid(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("build_moore_grid: rows and cols must be >= 1");
    const int m = rows * cols;
    std::vector<std::uint8_t> edges(static_cast<std::size_t>(m) * m, 0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int i = r * cols + c;
            edges[static_cast<std::size_t>(i) * m + i] = 1;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int rr = r + dr;
                    const int cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                    edges[static_cast<std::size_t>(i) * m + (rr * cols + cc)] = 1;
                }
            }
        }
    }
    return TaskGraph(m, std::move(edges));
}

StochasticMatrix normalize_adjacency(const TaskGraph& g) {
    const int m = g.num_tasks();
    std::vector<double> entries(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double inv_deg = 1.0 / static_cast<double>(g.degree(i));
        for (int j = 0; j < m; ++j)
            if (g.edge(i, j)) entries[static_cast<std::size_t>(i) * m + j] = inv_deg;
    }
    return {m, std::move(entries)};
}

bool is_irreducible(const StochasticMatrix& P) {
    return strongly_connected(P.dim(), [&P](int i, int j) { return P(i, j) > 0.0; });
}

ProbabilityVector stationary_distribution(const StochasticMatrix& P, double tol,
                                          int max_iter) {
    const int m = P.dim();
    if (m == 1) return ProbabilityVector({1.0});

    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::Map<const RowMajorMatrix> pm(P.entries().data(), m, m);
    RowMajorMatrix a = pm.transpose() - RowMajorMatrix::Identity(m, m);
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    Eigen::VectorXd x = a.partialPivLu().solve(b);

    std::vector<double> pi(static_cast<std::size_t>(m));
    bool usable = x.allFinite();
    if (usable) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
            if (x(i) <= 0.0) usable = false;
            sum += x(i);
        }
        if (usable) {
            for (int i = 0; i < m; ++i) pi[static_cast<std::size_t>(i)] = x(i) / sum;
            usable = fixed_point_residual(pi, P) <= tol;
        }
    }

    if (!usable && !power_iterate(P, tol, max_iter, pi))
        throw NonConvergence("stationary_distribution: residual above tolerance after " +
                             std::to_string(max_iter) + " fallback iterations");

    return ProbabilityVector(std::move(pi));
}

bool check_sparsity_match(const StochasticMatrix& P, const StochasticMatrix& ref) {
    if (P.dim() != ref.dim())
        throw std::invalid_argument("check_sparsity_match: dimension mismatch");
    const std::size_t n = P.entries().size();
    for (std::size_t k = 0; k < n; ++k)
        if ((P.entries()[k] > 0.0) != (ref.entries()[k] > 0.0)) return false;
    return true;
}

double stationary_residual(const ProbabilityVector& pi, const StochasticMatrix& P) {
    if (pi.dim() != P.dim())
        throw std::invalid_argument("stationary_residual: dimension mismatch");
    return fixed_point_residual(pi.values(), P);
}

}  // namespace swarmctl
