#include "gaspower/coupling.hpp"

#include "gaspower/error.hpp"

#include <cmath>
#include <sstream>

namespace gaspower {

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::cweno3 ? "cweno3" : "ibox";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "cweno3") return Scheme::cweno3;
    if (name == "ibox") return Scheme::ibox;
    throw Error(ErrorCategory::config, "unknown scheme '" + std::string(name) + "' (expected cweno3 or ibox)");
}

GridLayout layout_for(Scheme scheme) noexcept {
    return scheme == Scheme::cweno3 ? GridLayout::cell_averages : GridLayout::nodal;
}

GasStepper::GasStepper(GasNetwork& net, Scheme scheme, Forcing forcing) : net_(net), scheme_(scheme) {
    if (!net.finalized() || net.layout() != layout_for(scheme)) {
        throw Error(ErrorCategory::config, "network layout does not match scheme " + std::string(to_string(scheme)));
    }
    if (scheme == Scheme::cweno3) {
        cweno_.forcing = std::move(forcing);
    } else {
        IboxOptions o;
        o.forcing = std::move(forcing);
        ibox_ = std::make_unique<IboxSolver>(net, std::move(o));
    }
}

StepReport GasStepper::step(double t, double dt) {
    return scheme_ == Scheme::cweno3 ? cweno3_step(net_, t, dt, cweno_) : ibox_->step(t, dt);
}

double heat_rate(double P, const HeatRate& c) {
    const double e = c.a0 + c.a1 * P + c.a2 * P * P;
    if (!(e >= 0.0)) {
        std::ostringstream os;
        os << "heat rate is negative (" << e << ") at P = " << P << " p.u.";
        throw Error(ErrorCategory::config, os.str());
    }
    return e;
}

double heat_rate(double P, const GasPowerLink& link) { return heat_rate(P, link.coefficients); }

double extraction_flux(double P, const GasPowerLink& link, double area) {
    return heat_rate(P, link) * link.reference_density / area;
}

void apply_schedules(power::PowerGrid& grid, std::span<const DemandSchedule> schedules, double t) {
    for (const auto& s : schedules) {
        auto& bus = grid.buses[grid.bus_index(s.bus)];
        if (!s.P.empty()) bus.P = s.P(t);
        if (!s.Q.empty()) bus.Q = s.Q(t);
    }
}

double link_area(const GasNetwork& net, const GasPowerLink& link) {
    const std::size_t node = net.node_index(link.gas_node);
    if (net.nodes()[node].kind != NodeKind::junction) {
        throw Error(ErrorCategory::config, "linked gas node '" + link.gas_node + "' is not a junction");
    }
    return net.pipes()[net.incident(node).front().pipe].geometry.area();
}

CosimReport couple_power(GasNetwork& net, power::PowerGrid& grid, const GasPowerLink& link,
                         std::span<const DemandSchedule> schedules, double t) {
    apply_schedules(grid, schedules, t);
    CosimReport r;
    r.power = power::solve_newton(grid, power::InitialGuess::warm);
    // Keep the solved voltages as the next initial guess; the specified P, Q stay.
    for (std::size_t i = 0; i < grid.buses.size(); ++i) {
        grid.buses[i].vm = r.power.vm[static_cast<Eigen::Index>(i)];
        grid.buses[i].va = r.power.va[static_cast<Eigen::Index>(i)];
    }
    r.slack_P = r.power.P[static_cast<Eigen::Index>(grid.bus_index(link.bus))];
    r.consumption = heat_rate(r.slack_P, link);
    r.epsilon = r.consumption * link.reference_density / link_area(net, link);
    net.nodes()[net.node_index(link.gas_node)].coupled_extraction = r.epsilon;
    return r;
}

CosimReport cosim_step(GasStepper& gas, power::PowerGrid& grid, const GasPowerLink& link,
                       std::span<const DemandSchedule> schedules, double t, double dt) {
    CosimReport r = couple_power(gas.network(), grid, link, schedules, t);
    r.gas = gas.step(t, dt);
    return r;
}

}  // namespace gaspower
