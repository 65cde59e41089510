#pragma once

#include "swarmctl/types.hpp"

namespace swarmctl {

/// Per-state retention gains d_i, all strictly inside (0, 1).
class DiagonalGain {
public:
    /// Throws GainOutOfRange unless every entry lies in (0, 1).
    explicit DiagonalGain(std::vector<double> values);

    int dim() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Closed-form gain vector: d_i proportional to pi_source_i / p_target_i,
/// normalized to sum 1. Both inputs must be strictly positive. Throws
/// DegenerateDimension for M = 1, where the only admissible gain would be 1.
DiagonalGain gain_from_distributions(const ProbabilityVector& pi_source,
                                     const ProbabilityVector& p_target);

/// Convex pull toward the identity, row by row:
///   out_ij = d_i P_ij           (i != j)
///   out_ii = d_i P_ii + 1 - d_i
/// Keeps rows stochastic exactly and preserves support and irreducibility.
StochasticMatrix apply_gain(const StochasticMatrix& P, const DiagonalGain& d);

/// Broadcast-kernel synthesis: gains from the stationary vector of P and the
/// target, then the gain transform. The result is row-stochastic, has the
/// same support as P, is irreducible, and has stationary distribution
/// p_target within `tol` (verified before returning). Requires strictly
/// positive p_target and an irreducible P with positive diagonal.
StochasticMatrix synthesize_central(const StochasticMatrix& P,
                                    const ProbabilityVector& p_target,
                                    double tol = 1e-8);

/// Same transform with the gain sourced from an arbitrary distribution
/// instead of the stationary vector (the literal closed-form expression with
/// the initial swarm state). Carries no stationary guarantee; exposed for
/// comparison runs.
StochasticMatrix synthesize_from_source(const StochasticMatrix& P,
                                        const ProbabilityVector& source,
                                        const ProbabilityVector& p_target);

}  // namespace swarmctl
