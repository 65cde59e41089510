#pragma once

#include <span>
#include <vector>

#include "swarmctl/types.hpp"

namespace swarmctl {

/// Signed per-task weight in [-1, 1]. In the feedback loop this is the raw
/// tracking error chi_i = target_i - current_i.
class CharacteristicVector {
public:
    explicit CharacteristicVector(std::vector<double> values);

    /// chi = target - now, entrywise.
    static CharacteristicVector error_between(const ProbabilityVector& target,
                                              const ProbabilityVector& now);

    int dim() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const noexcept { return values_; }
    double inf_norm() const;

private:
    std::vector<double> values_;
};

/// Discounted expected characteristic weight per task.
struct MeasureVector {
    std::vector<double> values;

    int dim() const noexcept { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    double inf_norm() const;
};

/// Per-epoch sharpness beta^[k] of the feedback sigmoid.
struct BetaSchedule {
    enum class Kind { Constant, InverseK, Exponential };

    Kind kind = Kind::Constant;
    double gamma = 1.0;           // scale; beta at k = 1 for InverseK
    double decay_horizon = 1.0;   // N in gamma * exp(-k / N); Exponential only

    static BetaSchedule constant(double gamma);
    static BetaSchedule inverse_k(double gamma);
    static BetaSchedule exponential(double gamma, double decay_horizon);

    /// Schedule value at epoch k >= 1: gamma, gamma / k, or gamma * exp(-k/N).
    double beta_at(int k) const;
};

/// Parameters of the distributed feedback controller.
struct FeedbackParams {
    double theta = 0.02;     // measure discount control, in (0, 1)
    double lambda = 0.2;     // steady-state activity fraction, in (0, 1)
    BetaSchedule schedule{};
    double measure_tol = 1e-10;
    int measure_max_iter = 0;  // 0: derive from the contraction bound

    void validate() const;
};

/// nu = theta * [I - (1 - theta) P]^{-1} chi by dense solve. The system is
/// invertible for every theta in (0, 1); SingularSystem signals a malformed P.
MeasureVector measure_direct(const StochasticMatrix& P, const CharacteristicVector& chi,
                             double theta);

/// Same fixed point by synchronous sweeps from nu = 0:
///   nu_i <- (1 - theta) * sum_j P_ij nu_j + theta * chi_i
/// (two-buffer update; all states advance on the old values each round).
/// Stops when successive sweeps differ by at most `tol` in the max norm;
/// throws NonConvergence if `max_iter` sweeps are not enough.
MeasureVector measure_iterative(const StochasticMatrix& P, const CharacteristicVector& chi,
                                double theta, double tol = 1e-10, int max_iter = 0);

/// Sweeps needed for measure_iterative to reach `tol` from nu = 0, by the
/// (1 - theta) contraction factor, with a 2x margin.
int measure_iteration_bound(double theta, double tol, double chi_inf);

/// theta -> 0 limit of the measure: (pi . chi) * ones for irreducible P.
MeasureVector cesaro_measure(const StochasticMatrix& P, const CharacteristicVector& chi);

/// f_lambda(mu) = 1 / (1 + (1/lambda - 1) exp(-beta mu)): strictly increasing,
/// maps 0 to lambda, output clamped to stay strictly inside (0, 1).
double sigmoid_activity(double mu, double lambda, double beta);

/// Per-state perturbation of the broadcast kernel: the gain transform with
/// activity levels b as the diagonal. Every b_i must lie in (0, 1).
StochasticMatrix feedback_kernel(const StochasticMatrix& p_star, std::span<const double> b);

/// Intermediate quantities of one feedback epoch.
struct FeedbackDiagnostics {
    std::vector<double> chi;
    std::vector<double> nu;
    std::vector<double> mu;   // nu - chi
    std::vector<double> b;    // f_lambda(mu_i) at this epoch's beta
    double beta = 0.0;
};

struct FeedbackResult {
    StochasticMatrix kernel;
    FeedbackDiagnostics diagnostics;
};

/// One epoch of the distributed policy: chi from the tracking error, nu by
/// synchronous measure sweeps, mu = nu - chi, activities through the sigmoid
/// at beta^[k], and the perturbed kernel.
FeedbackResult feedback_step(const StochasticMatrix& p_star, const ProbabilityVector& p_now,
                             const ProbabilityVector& p_target, const FeedbackParams& params,
                             int k);

}  // namespace swarmctl
