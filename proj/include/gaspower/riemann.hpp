#pragma once

#include "gaspower/laxcurves.hpp"

#include <limits>
#include <span>
#include <vector>

namespace gaspower {

// One pipe end at a junction. A compressor on the pipe raises (ratio > 1) the
// pressure seen by the pipe relative to the junction pressure: p(rho_i) = ratio * p(rho).
struct JunctionPipe {
    GasState state;
    Side side = Side::incoming;
    double ratio = 1.0;
};

struct JunctionSolution {
    double rho_star = 0.0;
    double epsilon = 0.0;
    std::vector<GasState> initial;
    std::vector<Side> sides;
    std::vector<double> ratios;
    std::vector<GasState> traces;
    std::vector<WaveType> waves;
    double rho_min_junction = 0.0;
    double rho_max_junction = std::numeric_limits<double>::infinity();
    double max_extraction = 0.0;
    bool admissible = false;
    // Every trace state is sub-sonic and rho_star < rho_max_junction.
    bool subsonic_traces = false;

    // sum_in q - sum_out q - epsilon
    double flux_residual() const;
};

struct JunctionOptions {
    // The rho_max scan is comparatively expensive; time steppers skip it and
    // rely on the direct sub-sonic test of the traces.
    bool compute_rho_max = true;
};

// Solves sum_in L_l(rho_i) - sum_out L_r(rho_i) = extraction for the junction
// density on the admissible branch rho > rho_min_junction. Negative extraction
// means injection (used for inflow boundaries).
//   no admissible root with extraction <= 0 -> no_solution error
//   extraction >= maximum, extraction > 0   -> InvalidDemandError
JunctionSolution solve_junction(std::span<const JunctionPipe> pipes, double extraction, const PressureLaw& law,
                                const JunctionOptions& options = {});

// Plain Riemann problem: the intersection of L_l and L_r right of the maximizer
// of L_l - L_r. The root may lie below rho_min_junction (a wave then crosses
// x = 0); `admissible` says whether it does not.
JunctionSolution solve_interface(const GasState& ul, const GasState& ur, const PressureLaw& law);
JunctionSolution solve_gas_power_junction(const GasState& ul, const GasState& ur, double epsilon,
                                          const PressureLaw& law);
JunctionSolution solve_multi_junction(std::span<const GasState> incoming, std::span<const GasState> outgoing,
                                      double epsilon, const PressureLaw& law);

// (L_l - L_r)(rho_min_junction)
double max_extraction(const GasState& ul, const GasState& ur, const PressureLaw& law);

struct WaveThresholds {
    double shock_shock_upper = 0.0;  // s-s for epsilon <= this
    double mixed_upper = 0.0;        // one shock, one rarefaction up to this
    double max_extraction = 0.0;     // r-r below this, invalid at and above
};

WaveThresholds wave_thresholds(const GasState& ul, const GasState& ur, const PressureLaw& law);

// Self-similar solution at xi = x/t for a two-pipe junction located at x = 0.
// xi < 0 lies in the incoming pipe, xi >= 0 in the outgoing one. Exactly on a
// shock the state to its right is returned.
GasState sample_solution(const JunctionSolution& sol, double xi, const PressureLaw& law);

}  // namespace gaspower
