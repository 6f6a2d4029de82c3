#pragma once

#include "gaspower/laxcurves.hpp"
#include "gaspower/time_series.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace gaspower {

struct PipeGeometry {
    double length = 1.0;     // [m]
    double diameter = 1.0;   // [m]
    double roughness = 0.0;  // [m]

    double area() const noexcept;
    friend bool operator==(const PipeGeometry&, const PipeGeometry&) = default;
};

// Finite-volume cell averages (explicit scheme) or N+1 nodal values (box scheme).
enum class GridLayout { cell_averages, nodal };

struct PipeGrid {
    std::string id;
    std::string from;
    std::string to;
    PipeGeometry geometry;
    std::size_t cells = 1;
    GridLayout layout = GridLayout::cell_averages;
    Eigen::ArrayXd rho;
    Eigen::ArrayXd q;

    double dx() const noexcept { return geometry.length / static_cast<double>(cells); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(rho.size()); }
    // Position of value j measured from the pipe start.
    double x(std::size_t j) const noexcept;
    GasState state(std::size_t j) const { return {rho[static_cast<Eigen::Index>(j)], q[static_cast<Eigen::Index>(j)]}; }
    void set(std::size_t j, const GasState& u) {
        rho[static_cast<Eigen::Index>(j)] = u.rho;
        q[static_cast<Eigen::Index>(j)] = u.q;
    }
    GasState first() const { return state(0); }
    GasState last() const { return state(size() - 1); }
};

// Ideal compressor at a node: the suction pipe sees the node pressure divided by ratio.
struct Compressor {
    std::string suction_pipe;
    double ratio = 1.05;

    friend bool operator==(const Compressor&, const Compressor&) = default;
};

enum class NodeKind {
    junction,  // mass balance with extraction; a single pipe makes it a flow boundary
    pressure,  // prescribed pressure
    periodic,  // joins the two ends of one pipe
};

struct GasNode {
    std::string id;
    NodeKind kind = NodeKind::junction;
    TimeSeries pressure;    // [Pa] for pressure nodes
    TimeSeries extraction;  // momentum flux leaving the network [kg/(m^2 s)], negative for inflow
    std::optional<Compressor> compressor;
    // Additional extraction imposed from outside (gas-to-power coupling).
    double coupled_extraction = 0.0;
};

struct SourceModel {
    double viscosity = 1e-5;  // [kg/(m s)]
    bool friction = false;

    friend bool operator==(const SourceModel&, const SourceModel&) = default;
};

struct PipeEnd {
    std::size_t pipe = 0;
    // incoming: the pipe ends at the node; outgoing: it starts there.
    Side side = Side::incoming;
};

class GasNetwork {
public:
    GasNetwork(PressureLaw law, SourceModel source = {});

    std::size_t add_node(GasNode node);
    std::size_t add_pipe(std::string id, std::string from, std::string to, PipeGeometry geometry, std::size_t cells);

    // Validates topology and allocates the state arrays in the given layout.
    void finalize(GridLayout layout);
    bool finalized() const noexcept { return finalized_; }
    GridLayout layout() const noexcept { return layout_; }

    const PressureLaw& law() const noexcept { return law_; }
    const SourceModel& source() const noexcept { return source_; }
    void set_source(SourceModel source) { source_ = source; }

    std::vector<GasNode>& nodes() noexcept { return nodes_; }
    const std::vector<GasNode>& nodes() const noexcept { return nodes_; }
    std::vector<PipeGrid>& pipes() noexcept { return pipes_; }
    const std::vector<PipeGrid>& pipes() const noexcept { return pipes_; }

    std::size_t node_index(const std::string& id) const;
    std::size_t pipe_index(const std::string& id) const;
    const std::vector<PipeEnd>& incident(std::size_t node) const { return incidence_.at(node); }

    // Pressure seen by the pipe end relative to the node pressure.
    double pressure_ratio(std::size_t node, const PipeEnd& end) const;
    double extraction(std::size_t node, double t) const;

    // State value adjacent to the node on the given pipe end.
    GasState end_state(const PipeEnd& end) const;

    void fill(const GasState& u);
    void fill_pipe(std::size_t pipe, const GasState& u);

    // Total mass: sum rho A dx for cell averages, trapezoidal rule for nodal values.
    double total_mass() const;

    // All values sub-sonic with positive density.
    bool all_subsonic() const;

private:
    PressureLaw law_;
    SourceModel source_;
    std::vector<GasNode> nodes_;
    std::vector<PipeGrid> pipes_;
    std::vector<std::vector<PipeEnd>> incidence_;
    GridLayout layout_ = GridLayout::cell_averages;
    bool finalized_ = false;
};

}  // namespace gaspower
