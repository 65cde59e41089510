// Long-horizon behavior of the controllers on the 35-task grid. The grid
// gains are sum-normalized, so every kernel sits within ~1/35 of the
// identity; convergence horizons here are calibrated to that mixing rate.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "swarmctl/central.hpp"
#include "swarmctl/core.hpp"
#include "swarmctl/simulator.hpp"

using namespace swarmctl;

namespace {

ScenarioConfig grid_scenario(Controller controller, int epochs) {
    return ScenarioConfig{build_moore_grid(5, 7), ProbabilityVector::unit(35, 0),
                          ProbabilityVector::uniform(35), std::move(controller), epochs};
}

DistributedControl constant_beta(double beta) {
    DistributedControl ctl;
    ctl.params.schedule = BetaSchedule::constant(beta);
    return ctl;
}

}  // namespace

TEST_CASE("central control converges monotonically to the target") {
    const SimulationTrace trace = run_scenario(grid_scenario(CentralControl{}, 7000));

    for (std::size_t i = 2; i < trace.records.size(); ++i)
        CHECK(trace.records[i].error_inf <= trace.records[i - 1].error_inf + 1e-15);
    CHECK(trace.records.back().error_inf < 1e-4);

    // steady-state activity settles at the broadcast kernel's level
    const StochasticMatrix p_star = synthesize_central(
        normalize_adjacency(build_moore_grid(5, 7)), ProbabilityVector::uniform(35), 1e-8);
    const double ref = activity_level(ProbabilityVector::uniform(35), p_star);
    CHECK(std::abs(trace.records.back().activity - ref) <= 1e-6);
}

TEST_CASE("moderate constant feedback converges; an oversized gain plateaus") {
    // beta = 6e3: the sigmoid relaxes before the state reaches the target,
    // and the error collapses completely.
    const SimulationTrace ok = run_scenario(grid_scenario(constant_beta(6e3), 12000));
    CHECK(ok.records.back().error_inf < 1e-8);

    // beta = 6e5: the feedback keeps overshooting near the target; the error
    // locks into a micro limit cycle well above convergence.
    const SimulationTrace stuck = run_scenario(grid_scenario(constant_beta(6e5), 12000));
    CHECK(stuck.records.back().error_inf > 1e-4);
    CHECK(stuck.records.back().error_inf < 5e-3);
    const OscillationReport osc = detect_oscillation(stuck, 50, 1e-9);
    CHECK(osc.oscillating);
    CHECK(osc.amplitude < 1e-4);
}
