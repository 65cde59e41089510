#include "swarmctl/central.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swarmctl/core.hpp"
#include "swarmctl/errors.hpp"

namespace swarmctl {

DiagonalGain::DiagonalGain(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("DiagonalGain: dim must be >= 1");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !(values_[i] < 1.0))
            throw GainOutOfRange("DiagonalGain: entry " + std::to_string(i) + " = " +
                                 std::to_string(values_[i]) + " outside (0, 1)");
    }
}

DiagonalGain gain_from_distributions(const ProbabilityVector& pi_source,
                                     const ProbabilityVector& p_target) {
    if (pi_source.dim() != p_target.dim())
        throw std::invalid_argument("gain_from_distributions: dimension mismatch");
    if (pi_source.dim() == 1)
        throw DegenerateDimension(
            "gain_from_distributions: undefined for a single task (d = 1)");
    if (!pi_source.strictly_positive() || !p_target.strictly_positive())
        throw std::invalid_argument(
            "gain_from_distributions: both distributions must be strictly positive");

    const int m = pi_source.dim();
    std::vector<double> d(static_cast<std::size_t>(m));
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        d[static_cast<std::size_t>(i)] = pi_source[i] / p_target[i];
        sum += d[static_cast<std::size_t>(i)];
    }
    for (double& v : d) v /= sum;
    return DiagonalGain(std::move(d));
}

StochasticMatrix apply_gain(const StochasticMatrix& P, const DiagonalGain& d) {
    if (P.dim() != d.dim())
        throw std::invalid_argument("apply_gain: dimension mismatch");
    const int m = P.dim();
    std::vector<double> out(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const double di = d[i];
        for (int j = 0; j < m; ++j)
            out[static_cast<std::size_t>(i) * m + j] = di * P(i, j);
        out[static_cast<std::size_t>(i) * m + i] += 1.0 - di;
    }
    return {m, std::move(out)};
}

StochasticMatrix synthesize_central(const StochasticMatrix& P,
                                    const ProbabilityVector& p_target, double tol) {
    if (P.dim() != p_target.dim())
        throw std::invalid_argument("synthesize_central: dimension mismatch");
    if (!p_target.strictly_positive())
        throw std::invalid_argument("synthesize_central: target must be strictly positive");
    if (P.dim() == 1) return P;  // [[1]] is the only 1-state kernel; target is [1]

    for (int i = 0; i < P.dim(); ++i)
        if (!(P(i, i) > 0.0))
            throw std::invalid_argument(
                "synthesize_central: kernel needs a positive diagonal (task " +
                std::to_string(i) + ")");
    if (!is_irreducible(P))
        throw std::invalid_argument("synthesize_central: kernel is not irreducible");

    const ProbabilityVector pi = stationary_distribution(P, std::min(tol, 1e-10));
    const StochasticMatrix p_star = apply_gain(P, gain_from_distributions(pi, p_target));

    if (!check_sparsity_match(p_star, P))
        throw SparsityViolation("synthesize_central: output support differs from input");
    const ProbabilityVector pi_star = stationary_distribution(p_star, std::min(tol, 1e-10));
    double err = 0.0;
    for (int i = 0; i < p_star.dim(); ++i)
        err = std::max(err, std::abs(pi_star[i] - p_target[i]));
    if (err > tol)
        throw NonConvergence("synthesize_central: stationary distribution misses target by " +
                             std::to_string(err));
    return p_star;
}

StochasticMatrix synthesize_from_source(const StochasticMatrix& P,
                                        const ProbabilityVector& source,
                                        const ProbabilityVector& p_target) {
    if (P.dim() == 1) return P;
    return apply_gain(P, gain_from_distributions(source, p_target));
}

}  // namespace swarmctl
