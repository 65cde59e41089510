#pragma once

#include "swarmctl/types.hpp"

namespace swarmctl {

/// Grid of rows x cols tasks where every node connects to its Moore
/// neighborhood (the 8 surrounding cells, clipped at the boundary) plus
/// itself. Interior nodes have 8 neighbors, edge nodes 5, corners 3.
TaskGraph build_moore_grid(int rows, int cols);

/// Uniform kernel on the graph: entries[i][j] = 1/deg(i) on edges, 0 off
/// edges, with deg(i) counting the self-loop. Irreducible with strictly
/// positive diagonal by the TaskGraph invariants.
StochasticMatrix normalize_adjacency(const TaskGraph& g);

/// True iff the digraph of strictly positive entries of P is strongly
/// connected (graph search; no matrix powers).
bool is_irreducible(const StochasticMatrix& P);

/// Unique stationary distribution pi of an irreducible P: pi P = pi,
/// sum pi = 1, pi > 0. Solves the transposed fixed-point system directly,
/// with one equation replaced by the normalization; falls back to damped
/// power iteration on (P + I)/2 when the solve is unusable. Throws
/// NonConvergence if the residual still exceeds `tol` after `max_iter`
/// fallback sweeps.
ProbabilityVector stationary_distribution(const StochasticMatrix& P,
                                          double tol = 1e-10,
                                          int max_iter = 10000);

/// True iff P and ref have identical supports: P_ij > 0 <=> ref_ij > 0.
bool check_sparsity_match(const StochasticMatrix& P, const StochasticMatrix& ref);

/// Residual of the stationary fixed point, max_j |(pi P)_j - pi_j|.
double stationary_residual(const ProbabilityVector& pi, const StochasticMatrix& P);

}  // namespace swarmctl
