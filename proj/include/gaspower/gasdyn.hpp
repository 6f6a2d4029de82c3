#pragma once

#include "gaspower/network.hpp"
#include "gaspower/riemann.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <vector>

namespace gaspower {

// Flux F(U) = (q, p + q^2/rho) and source G(U) = (0, S) of the isentropic Euler system.
GasState physical_flux(const GasState& u, const PressureLaw& law);

// Extra source (per unit length and time) added to the balance law, used for
// manufactured solutions: (x along the pipe, t, pipe index) -> (G_rho, G_q).
using Forcing = std::function<GasState(double x, double t, std::size_t pipe)>;

// Coupling state at node `node` at time t given the pipe states adjacent to it
// (in the order of GasNetwork::incident). Pressure nodes return the trace that
// matches the prescribed density along each pipe's Lax curve; junctions solve
// the junction Riemann problem with the node's extraction. Periodic nodes have
// no coupling state and are rejected.
JunctionSolution apply_boundary(const GasNetwork& net, std::size_t node, std::span<const GasState> adjacent,
                                double t, const JunctionOptions& options = {.compute_rho_max = false});

struct StepReport {
    // Mass leaving the network during the step through all nodes [kg or nondim.].
    double boundary_outflow = 0.0;
    double max_flux_residual = 0.0;      // relative, over all junction solves
    double max_pressure_mismatch = 0.0;  // relative, over all junction solves
    std::size_t junction_solves = 0;
    int newton_iterations = 0;
    double residual = 0.0;
    double courant = 0.0;
    bool inverse_cfl_violated = false;
    // Last coupling solution per node (empty for periodic nodes).
    std::vector<JunctionSolution> node_solutions;

    void record(const JunctionSolution& sol, const PressureLaw& law);
};

struct Cweno3Options {
    double cfl = 0.45;
    Forcing forcing;
};

// One SSP-RK3 step of the CWENO3 finite-volume scheme with local Lax-Friedrichs
// fluxes; the network must use the cell_averages layout.
StepReport cweno3_step(GasNetwork& net, double t, double dt, const Cweno3Options& options = {});

// Largest stable step under the given Courant number.
double cweno3_max_dt(const GasNetwork& net, double cfl);

// Third-order CWENO reconstruction of one cell from averages (left, centre,
// right); returns the values at the left and right cell faces. eps is the
// smoothness-indicator regularization.
std::pair<double, double> cweno3_faces(double um, double u0, double up, double eps);

struct IboxOptions {
    int max_iterations = 50;
    double tolerance = 1e-10;
    Forcing forcing;
};

// Implicit box scheme on nodal values. The sparse pattern and symbolic
// factorization are set up once per network and reused for every step.
class IboxSolver {
public:
    explicit IboxSolver(GasNetwork& net, IboxOptions options = {});
    ~IboxSolver();
    IboxSolver(const IboxSolver&) = delete;
    IboxSolver& operator=(const IboxSolver&) = delete;

    // Advances from t to t + dt; throws step_failure if Newton does not converge.
    StepReport step(double t, double dt);

    std::size_t unknowns() const noexcept;
    const IboxOptions& options() const noexcept { return options_; }

    struct Impl;

private:
    GasNetwork& net_;
    IboxOptions options_;
    std::unique_ptr<Impl> impl_;
};

StepReport ibox_step(GasNetwork& net, double t, double dt, const IboxOptions& options = {});

}  // namespace gaspower
