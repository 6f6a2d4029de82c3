#pragma once

#include "gaspower/output.hpp"
#include "gaspower/scenario.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gaspower {

// One concrete run of a scenario: a numerics entry combined with at most one
// law and one extraction value from the sweeps.
struct RunVariant {
    std::string label;
    std::string law;
    std::optional<double> extraction;
    NumericsSpec numerics;
};

std::vector<RunVariant> expand_variants(const Scenario& scenario);

// Finalized network in the layout of the variant's scheme, filled with the
// uniform or per-pipe initial state (a stationary start is left to simulate()).
GasNetwork build_network(const Scenario& scenario, const RunVariant& variant);

// Coupling state per node from the current pipe values: Riemann traces for
// cell averages, the end values themselves for nodal grids. Periodic nodes
// get an empty entry.
std::vector<JunctionSolution> node_states(const GasNetwork& net, double t);

enum class RunMode {
    gas,    // power flow solved once at t = 0, extraction then held fixed
    cosim,  // power flow re-solved every gas step
};

struct RunStats {
    std::size_t steps = 0;
    double max_mass_defect = 0.0;  // |M1 - M0 + outflow| / M0 per step
    double max_flux_residual = 0.0;
    double max_pressure_mismatch = 0.0;
    double max_coupling_residual = 0.0;  // flux jump at the linked node vs. epsilon, relative
    std::size_t junction_solves = 0;
    long newton_iterations = 0;
    std::size_t inverse_cfl_warnings = 0;
    int stationary_steps = 0;
    double stationary_rate = 0.0;
    double wall_seconds = 0.0;
};

struct RunResult {
    RunVariant variant;
    std::vector<TimeSeriesOutput> series;
    std::vector<ProfileOutput> profiles;
    RunStats stats;
};

struct RunOptions {
    // Called after every accepted step with the new time.
    std::function<void(double t, const GasNetwork&, const StepReport&)> on_step;
};

RunResult simulate(const Scenario& scenario, const RunVariant& variant, RunMode mode, const RunOptions& options = {});

// Power flow of the scenario grid with demands from the schedules at time t.
power::PowerFlowSolution run_powerflow(const Scenario& scenario, double t = 0.0,
                                       power::InitialGuess initial = power::InitialGuess::flat);

// GASPOWER_OUTPUT_DIR when set, the scenario's output directory otherwise.
std::filesystem::path output_directory(const Scenario& scenario);

// Writes series and profiles, in a sub-directory per variant when there are several.
std::vector<std::filesystem::path> write_result(const Scenario& scenario, const RunResult& result,
                                                const std::filesystem::path& base, bool per_variant_directory);

}  // namespace gaspower
