#include "gaspower/error.hpp"
#include "gaspower/gasdyn.hpp"

#include <algorithm>
#include <cmath>

namespace gaspower {

GasState physical_flux(const GasState& u, const PressureLaw& law) {
    return {u.q, law.pressure(u.rho) + u.q * u.q / u.rho};
}

JunctionSolution apply_boundary(const GasNetwork& net, std::size_t node, std::span<const GasState> adjacent,
                                double t, const JunctionOptions& options) {
    const auto& n = net.nodes().at(node);
    const auto& ends = net.incident(node);
    if (adjacent.size() != ends.size()) {
        throw Error(ErrorCategory::domain, "node '" + n.id + "' needs one adjacent state per pipe end");
    }
    const auto& law = net.law();

    if (n.kind == NodeKind::periodic) {
        throw Error(ErrorCategory::domain, "periodic node '" + n.id + "' has no boundary state");
    }

    if (n.kind == NodeKind::pressure) {
        const double rho_b = law.density_at(n.pressure(t));
        JunctionSolution sol;
        sol.rho_star = rho_b;
        sol.admissible = true;
        sol.subsonic_traces = true;
        double net_flux = 0.0;
        for (std::size_t i = 0; i < ends.size(); ++i) {
            const Side side = ends[i].side;
            require_subsonic(adjacent[i], law);
            const GasState v{rho_b, lax_curve(side, rho_b, adjacent[i], law)};
            const double lo = rho_min(adjacent[i], side, law);
            sol.rho_min_junction = std::max(sol.rho_min_junction, lo);
            sol.admissible = sol.admissible && rho_b > lo;
            sol.subsonic_traces = sol.subsonic_traces && is_subsonic(v, law);
            sol.initial.push_back(adjacent[i]);
            sol.sides.push_back(side);
            sol.ratios.push_back(1.0);
            sol.traces.push_back(v);
            sol.waves.push_back(wave_type(rho_b, adjacent[i]));
            net_flux += side == Side::incoming ? v.q : -v.q;
        }
        // The pressure node absorbs whatever net flux the traces carry.
        sol.epsilon = net_flux;
        sol.max_extraction = std::numeric_limits<double>::infinity();
        return sol;
    }

    std::vector<JunctionPipe> pipes(ends.size());
    for (std::size_t i = 0; i < ends.size(); ++i) {
        pipes[i] = {adjacent[i], ends[i].side, net.pressure_ratio(node, ends[i])};
    }
    return solve_junction(pipes, net.extraction(node, t), law, options);
}

void StepReport::record(const JunctionSolution& sol, const PressureLaw& law) {
    ++junction_solves;
    double flux_scale = std::abs(sol.epsilon);
    for (const auto& v : sol.traces) flux_scale += std::abs(v.q);
    if (flux_scale > 0.0) {
        max_flux_residual = std::max(max_flux_residual, std::abs(sol.flux_residual()) / flux_scale);
    }
    const double p_star = law.pressure(sol.rho_star);
    const double p_scale = std::max(std::abs(p_star), law.dp(sol.rho_star) * sol.rho_star);
    for (std::size_t i = 0; i < sol.traces.size(); ++i) {
        const double mismatch = std::abs(law.pressure(sol.traces[i].rho) / sol.ratios[i] - p_star) / p_scale;
        max_pressure_mismatch = std::max(max_pressure_mismatch, mismatch);
    }
}

}  // namespace gaspower
