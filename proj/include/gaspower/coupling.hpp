#pragma once

#include "gaspower/gasdyn.hpp"
#include "gaspower/powerflow.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gaspower {

enum class Scheme { cweno3, ibox };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view name);

GridLayout layout_for(Scheme scheme) noexcept;

// Advances a finalized network with either scheme. The network layout must
// match the scheme.
class GasStepper {
public:
    GasStepper(GasNetwork& net, Scheme scheme, Forcing forcing = {});

    StepReport step(double t, double dt);
    Scheme scheme() const noexcept { return scheme_; }
    GasNetwork& network() noexcept { return net_; }

private:
    GasNetwork& net_;
    Scheme scheme_;
    Cweno3Options cweno_;
    std::unique_ptr<IboxSolver> ibox_;
};

struct HeatRate {
    double a0 = 2.0;
    double a1 = 5.0;
    double a2 = 10.0;

    friend bool operator==(const HeatRate&, const HeatRate&) = default;
};

// Generator at a power bus fed from a gas junction.
struct GasPowerLink {
    std::string gas_node;
    std::string bus;
    HeatRate coefficients;
    // Converts the volumetric consumption [m^3/s] to a momentum flux.
    double reference_density = 0.785;  // [kg/m^3]

    friend bool operator==(const GasPowerLink&, const GasPowerLink&) = default;
};

// a0 + a1 P + a2 P^2 with P in p.u.; a negative value is a config error.
double heat_rate(double P, const HeatRate& coefficients);
double heat_rate(double P, const GasPowerLink& link);

// Consumption as extraction [kg/(m^2 s)] at a junction of pipes with cross-section area.
double extraction_flux(double P, const GasPowerLink& link, double area);

struct DemandSchedule {
    std::string bus;
    TimeSeries P;  // empty: keep the bus value
    TimeSeries Q;

    friend bool operator==(const DemandSchedule&, const DemandSchedule&) = default;
};

void apply_schedules(power::PowerGrid& grid, std::span<const DemandSchedule> schedules, double t);

// Cross-section area of the pipes at the linked node.
double link_area(const GasNetwork& net, const GasPowerLink& link);

struct CosimReport {
    power::PowerFlowSolution power;
    double slack_P = 0.0;
    double consumption = 0.0;  // heat rate [m^3/s]
    double epsilon = 0.0;      // extraction [kg/(m^2 s)]
    StepReport gas;
};

// Solves the power flow for the demands at time t and converts the power at the
// linked bus into the extraction at the linked gas node.
CosimReport couple_power(GasNetwork& net, power::PowerGrid& grid, const GasPowerLink& link,
                         std::span<const DemandSchedule> schedules, double t);

// One quasi-static co-simulation step from t to t + dt: demands and power flow
// at t, then one gas step with the resulting extraction held fixed. The grid
// keeps the solved voltages as the warm start of the next step.
CosimReport cosim_step(GasStepper& gas, power::PowerGrid& grid, const GasPowerLink& link,
                       std::span<const DemandSchedule> schedules, double t, double dt);

struct StationaryOptions {
    double initial_dt = 1.0;
    double max_dt = 1e6;
    double growth = 2.0;
    double tolerance = 1e-10;  // on max |U^{n+1} - U^n| / dt
    int max_steps = 2000;
};

struct StationaryResult {
    int steps = 0;
    double rate = 0.0;  // final max |dU|/dt
    StepReport last;
};

// Pseudo-time marching with the box scheme at frozen boundary data (time t)
// until max |dU|/dt < tolerance. The network must use the nodal layout. Failed
// steps are retried with half the step.
StationaryResult find_stationary_state(GasNetwork& net, double t, const StationaryOptions& options = {});

}  // namespace gaspower
