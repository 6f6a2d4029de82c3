#pragma once

#include "gaspower/coupling.hpp"
#include "gaspower/network.hpp"
#include "gaspower/powerflow.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gaspower {

// All gas quantities are stored in SI units, power quantities in p.u.

struct GasNodeSpec {
    std::string id;
    NodeKind kind = NodeKind::junction;
    TimeSeries pressure;    // [Pa]
    TimeSeries density;     // alternative to pressure, converted with the run's law
    TimeSeries extraction;  // [kg/(m^2 s)]
    std::optional<Compressor> compressor;

    friend bool operator==(const GasNodeSpec&, const GasNodeSpec&) = default;
};

struct PipeSpec {
    std::string id;
    std::string from;
    std::string to;
    PipeGeometry geometry;

    friend bool operator==(const PipeSpec&, const PipeSpec&) = default;
};

struct InitialSpec {
    enum class Kind { uniform, per_pipe, stationary };
    Kind kind = Kind::uniform;
    GasState state{1.0, 0.0};
    std::vector<std::pair<std::string, GasState>> pipes;

    friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct NumericsSpec {
    Scheme scheme = Scheme::cweno3;
    double dt = 0.0;        // [s]
    double dx = 0.0;        // [m]; cells per pipe = round(length / dx)
    double end_time = 0.0;  // [s]

    friend bool operator==(const NumericsSpec&, const NumericsSpec&) = default;
};

struct LawVariant {
    std::string label;
    std::string law;

    friend bool operator==(const LawVariant&, const LawVariant&) = default;
};

struct ExtractionSweep {
    std::string node;
    std::vector<double> values;

    friend bool operator==(const ExtractionSweep&, const ExtractionSweep&) = default;
};

// Density along a chain of pipes, written at the end time. x is measured from
// the start of the first pipe and shifted by offset.
struct ProfileSpec {
    std::string id;
    std::vector<std::string> pipes;
    double offset = 0.0;

    friend bool operator==(const ProfileSpec&, const ProfileSpec&) = default;
};

// Series ids: pressure@<node> [Pa], density@<node>, inflow@<node> [kg/(m^2 s)],
// P@<bus>, Q@<bus>, Vm@<bus>, Va@<bus> [p.u., rad], epsilon [m^3/s], mass.
struct OutputPlan {
    std::string directory = "output";
    std::vector<std::string> series;
    double sample_interval = 0.0;  // 0: every step
    std::vector<ProfileSpec> profiles;
    bool svg = false;

    friend bool operator==(const OutputPlan&, const OutputPlan&) = default;
};

struct Scenario {
    std::string name;
    std::string law;
    SourceModel source;
    double reference_density = 0.785;  // [kg/m^3], for m3/s conversions
    std::vector<GasNodeSpec> gas_nodes;
    std::vector<PipeSpec> pipes;
    power::PowerGrid grid;
    std::vector<DemandSchedule> schedules;
    std::optional<GasPowerLink> link;
    InitialSpec initial;
    std::vector<NumericsSpec> numerics;
    std::vector<LawVariant> law_sweep;
    std::optional<ExtractionSweep> extraction_sweep;
    OutputPlan outputs;

    bool has_power() const noexcept { return !grid.buses.empty(); }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Parses and validates a scenario document. Violations raise SchemaError
// naming the field and the 1-based line.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

// Serializes with plain SI / p.u. numbers; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// Cross-reference checks (ids, slack bus, sweep targets); parse_scenario calls it.
void validate(const Scenario& scenario);

}  // namespace gaspower
