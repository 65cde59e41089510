#include "swarmctl/measure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "swarmctl/central.hpp"
#include "swarmctl/core.hpp"
#include "swarmctl/errors.hpp"

namespace swarmctl {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_theta(double theta) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw std::invalid_argument("theta must lie in (0, 1)");
}

double inf_norm_of(const std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
}

}  // namespace

CharacteristicVector::CharacteristicVector(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("CharacteristicVector: dim must be >= 1");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (std::abs(values_[i]) > 1.0)
            throw std::invalid_argument("CharacteristicVector: |entry " +
                                        std::to_string(i) + "| > 1");
}

CharacteristicVector CharacteristicVector::error_between(const ProbabilityVector& target,
                                                         const ProbabilityVector& now) {
    if (target.dim() != now.dim())
        throw std::invalid_argument("CharacteristicVector: dimension mismatch");
    std::vector<double> e(static_cast<std::size_t>(target.dim()));
    for (int i = 0; i < target.dim(); ++i) e[static_cast<std::size_t>(i)] = target[i] - now[i];
    return CharacteristicVector(std::move(e));
}

double CharacteristicVector::inf_norm() const { return inf_norm_of(values_); }

double MeasureVector::inf_norm() const { return inf_norm_of(values); }

BetaSchedule BetaSchedule::constant(double gamma) {
    return {Kind::Constant, gamma, 1.0};
}

BetaSchedule BetaSchedule::inverse_k(double gamma) {
    return {Kind::InverseK, gamma, 1.0};
}

BetaSchedule BetaSchedule::exponential(double gamma, double decay_horizon) {
    return {Kind::Exponential, gamma, decay_horizon};
}

double BetaSchedule::beta_at(int k) const {
    if (k < 1) throw std::invalid_argument("BetaSchedule: epoch index must be >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("BetaSchedule: gamma must be > 0");
    switch (kind) {
        case Kind::Constant:
            return gamma;
        case Kind::InverseK:
            return gamma / static_cast<double>(k);
        case Kind::Exponential:
            if (!(decay_horizon > 0.0))
                throw std::invalid_argument("BetaSchedule: decay horizon must be > 0");
            return gamma * std::exp(-static_cast<double>(k) / decay_horizon);
    }
    throw std::invalid_argument("BetaSchedule: unknown kind");
}

void FeedbackParams::validate() const {
    require_theta(theta);
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::invalid_argument("FeedbackParams: lambda must lie in (0, 1)");
    if (!(measure_tol > 0.0))
        throw std::invalid_argument("FeedbackParams: measure_tol must be > 0");
    if (measure_max_iter < 0)
        throw std::invalid_argument("FeedbackParams: measure_max_iter must be >= 0");
    if (!(schedule.gamma > 0.0))
        throw std::invalid_argument("FeedbackParams: schedule gamma must be > 0");
    if (schedule.kind == BetaSchedule::Kind::Exponential && !(schedule.decay_horizon > 0.0))
        throw std::invalid_argument("FeedbackParams: decay horizon must be > 0");
}

MeasureVector measure_direct(const StochasticMatrix& P, const CharacteristicVector& chi,
                             double theta) {
    require_theta(theta);
    if (P.dim() != chi.dim())
        throw std::invalid_argument("measure_direct: dimension mismatch");
    const int m = P.dim();

    Eigen::Map<const RowMajorMatrix> pm(P.entries().data(), m, m);
    RowMajorMatrix a = RowMajorMatrix::Identity(m, m) - (1.0 - theta) * pm;
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) rhs(i) = theta * chi[i];

    Eigen::PartialPivLU<RowMajorMatrix> lu(a);
    Eigen::VectorXd nu = lu.solve(rhs);
    if (!nu.allFinite() || (a * nu - rhs).cwiseAbs().maxCoeff() > 1e-8)
        throw SingularSystem("measure_direct: system solve failed; malformed kernel?");

    MeasureVector out;
    out.values.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.values[static_cast<std::size_t>(i)] = nu(i);
    return out;
}

int measure_iteration_bound(double theta, double tol, double chi_inf) {
    require_theta(theta);
    if (!(tol > 0.0)) throw std::invalid_argument("measure_iteration_bound: tol must be > 0");
    if (chi_inf <= tol) return 2;
    // Sweep deltas shrink as chi_inf * theta * (1-theta)^n; solve for n at tol.
    const double n = std::log(tol * theta / chi_inf) / std::log1p(-theta);
    const int bound = static_cast<int>(std::ceil(n)) + 1;
    return std::max(2, 2 * bound);
}

MeasureVector measure_iterative(const StochasticMatrix& P, const CharacteristicVector& chi,
                                double theta, double tol, int max_iter) {
    require_theta(theta);
    if (P.dim() != chi.dim())
        throw std::invalid_argument("measure_iterative: dimension mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("measure_iterative: tol must be > 0");
    if (max_iter <= 0) max_iter = measure_iteration_bound(theta, tol, chi.inf_norm());

    const int m = P.dim();
    std::vector<double> nu(static_cast<std::size_t>(m), 0.0);
    std::vector<double> next(static_cast<std::size_t>(m));
    const double keep = 1.0 - theta;

    for (int iter = 0; iter < max_iter; ++iter) {
        double delta = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto row = P.row(i);
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += row[static_cast<std::size_t>(j)] * nu[static_cast<std::size_t>(j)];
            const double v = keep * acc + theta * chi[i];
            delta = std::max(delta, std::abs(v - nu[static_cast<std::size_t>(i)]));
            next[static_cast<std::size_t>(i)] = v;
        }
        nu.swap(next);
        if (delta <= tol) return MeasureVector{std::move(nu)};
    }
    throw NonConvergence("measure_iterative: no convergence in " +
                         std::to_string(max_iter) + " sweeps");
}

MeasureVector cesaro_measure(const StochasticMatrix& P, const CharacteristicVector& chi) {
    if (P.dim() != chi.dim())
        throw std::invalid_argument("cesaro_measure: dimension mismatch");
    const ProbabilityVector pi = stationary_distribution(P);
    double dot = 0.0;
    for (int i = 0; i < P.dim(); ++i) dot += pi[i] * chi[i];
    return MeasureVector{std::vector<double>(static_cast<std::size_t>(P.dim()), dot)};
}

double sigmoid_activity(double mu, double lambda, double beta) {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::invalid_argument("sigmoid_activity: lambda must lie in (0, 1)");
    if (!(beta > 0.0)) throw std::invalid_argument("sigmoid_activity: beta must be > 0");
    // exp argument clamped against overflow; output clamped so downstream
    // kernels keep strictly positive retention on both branches.
    const double z = std::clamp(-beta * mu, -700.0, 700.0);
    const double f = 1.0 / (1.0 + (1.0 / lambda - 1.0) * std::exp(z));
    constexpr double eps = 1e-12;
    return std::clamp(f, eps, 1.0 - eps);
}

StochasticMatrix feedback_kernel(const StochasticMatrix& p_star, std::span<const double> b) {
    if (static_cast<int>(b.size()) != p_star.dim())
        throw std::invalid_argument("feedback_kernel: dimension mismatch");
    return apply_gain(p_star, DiagonalGain(std::vector<double>(b.begin(), b.end())));
}

FeedbackResult feedback_step(const StochasticMatrix& p_star, const ProbabilityVector& p_now,
                             const ProbabilityVector& p_target, const FeedbackParams& params,
                             int k) {
    if (k < 1) throw std::invalid_argument("feedback_step: epoch index must be >= 1");
    require_theta(params.theta);

    FeedbackDiagnostics diag;
    CharacteristicVector chi = CharacteristicVector::error_between(p_target, p_now);
    MeasureVector nu = measure_iterative(p_star, chi, params.theta, params.measure_tol,
                                         params.measure_max_iter);

    const int m = p_star.dim();
    diag.beta = params.schedule.beta_at(k);
    diag.chi = chi.values();
    diag.nu = nu.values;
    diag.mu.resize(static_cast<std::size_t>(m));
    diag.b.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        diag.mu[static_cast<std::size_t>(i)] = nu[i] - chi[i];
        diag.b[static_cast<std::size_t>(i)] =
            sigmoid_activity(diag.mu[static_cast<std::size_t>(i)], params.lambda, diag.beta);
    }

    StochasticMatrix kernel = feedback_kernel(p_star, diag.b);
    return FeedbackResult{std::move(kernel), std::move(diag)};
}

}  // namespace swarmctl
