#include "gaspower/network.hpp"

#include "gaspower/error.hpp"

#include <cmath>
#include <numbers>

namespace gaspower {

double PipeGeometry::area() const noexcept { return 0.25 * std::numbers::pi * diameter * diameter; }

double PipeGrid::x(std::size_t j) const noexcept {
    const double h = dx();
    return layout == GridLayout::nodal ? h * static_cast<double>(j) : h * (static_cast<double>(j) + 0.5);
}

GasNetwork::GasNetwork(PressureLaw law, SourceModel source) : law_(std::move(law)), source_(source) {
    if (source_.friction && !(source_.viscosity > 0.0)) {
        throw Error(ErrorCategory::config, "dynamic viscosity must be positive");
    }
}

std::size_t GasNetwork::add_node(GasNode node) {
    for (const auto& n : nodes_) {
        if (n.id == node.id) throw Error(ErrorCategory::config, "duplicate node id '" + node.id + "'");
    }
    finalized_ = false;
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
}

std::size_t GasNetwork::add_pipe(std::string id, std::string from, std::string to, PipeGeometry geometry,
                                 std::size_t cells) {
    for (const auto& p : pipes_) {
        if (p.id == id) throw Error(ErrorCategory::config, "duplicate pipe id '" + id + "'");
    }
    if (!(geometry.length > 0.0) || !(geometry.diameter > 0.0) || !(geometry.roughness >= 0.0)) {
        throw Error(ErrorCategory::config, "pipe '" + id + "' needs positive length and diameter");
    }
    if (cells < 1) throw Error(ErrorCategory::config, "pipe '" + id + "' needs at least one cell");
    PipeGrid pipe;
    pipe.id = std::move(id);
    pipe.from = std::move(from);
    pipe.to = std::move(to);
    pipe.geometry = geometry;
    pipe.cells = cells;
    finalized_ = false;
    pipes_.push_back(std::move(pipe));
    return pipes_.size() - 1;
}

std::size_t GasNetwork::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) return i;
    }
    throw Error(ErrorCategory::config, "unknown node '" + id + "'");
}

std::size_t GasNetwork::pipe_index(const std::string& id) const {
    for (std::size_t i = 0; i < pipes_.size(); ++i) {
        if (pipes_[i].id == id) return i;
    }
    throw Error(ErrorCategory::config, "unknown pipe '" + id + "'");
}

void GasNetwork::finalize(GridLayout layout) {
    incidence_.assign(nodes_.size(), {});
    for (std::size_t p = 0; p < pipes_.size(); ++p) {
        const std::size_t from = node_index(pipes_[p].from);
        const std::size_t to = node_index(pipes_[p].to);
        if (from == to && nodes_[from].kind != NodeKind::periodic) {
            throw Error(ErrorCategory::config, "pipe '" + pipes_[p].id + "' is a loop on a non-periodic node");
        }
        incidence_[from].push_back({p, Side::outgoing});
        incidence_[to].push_back({p, Side::incoming});
    }
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        const auto& node = nodes_[n];
        const auto& ends = incidence_[n];
        if (ends.empty()) throw Error(ErrorCategory::config, "node '" + node.id + "' has no pipes");
        switch (node.kind) {
            case NodeKind::pressure:
                if (node.pressure.empty()) {
                    throw Error(ErrorCategory::config, "pressure node '" + node.id + "' has no pressure series");
                }
                break;
            case NodeKind::periodic:
                if (ends.size() != 2 || ends[0].pipe != ends[1].pipe) {
                    throw Error(ErrorCategory::config, "periodic node '" + node.id + "' must join both ends of one pipe");
                }
                break;
            case NodeKind::junction:
                // Mass balance sums momentum fluxes without area weights.
                for (const auto& e : ends) {
                    if (pipes_[e.pipe].geometry.diameter != pipes_[ends[0].pipe].geometry.diameter) {
                        throw Error(ErrorCategory::config,
                                    "pipes at junction '" + node.id + "' must share one diameter");
                    }
                }
                break;
        }
        if (node.compressor) {
            if (node.kind != NodeKind::junction) {
                throw Error(ErrorCategory::config, "compressor at '" + node.id + "' requires a junction node");
            }
            if (!(node.compressor->ratio > 0.0)) {
                throw Error(ErrorCategory::config, "compressor ratio at '" + node.id + "' must be positive");
            }
            bool found = false;
            for (const auto& e : ends) found = found || pipes_[e.pipe].id == node.compressor->suction_pipe;
            if (!found) {
                throw Error(ErrorCategory::config, "compressor suction pipe '" + node.compressor->suction_pipe +
                                                       "' is not attached to '" + node.id + "'");
            }
        }
    }
    layout_ = layout;
    for (auto& p : pipes_) {
        p.layout = layout;
        const auto n = static_cast<Eigen::Index>(layout == GridLayout::nodal ? p.cells + 1 : p.cells);
        if (p.rho.size() != n) {
            p.rho = Eigen::ArrayXd::Ones(n);
            p.q = Eigen::ArrayXd::Zero(n);
        }
    }
    finalized_ = true;
}

double GasNetwork::pressure_ratio(std::size_t node, const PipeEnd& end) const {
    const auto& n = nodes_[node];
    if (n.compressor && pipes_[end.pipe].id == n.compressor->suction_pipe) return 1.0 / n.compressor->ratio;
    return 1.0;
}

double GasNetwork::extraction(std::size_t node, double t) const {
    const auto& n = nodes_[node];
    return (n.extraction.empty() ? 0.0 : n.extraction(t)) + n.coupled_extraction;
}

GasState GasNetwork::end_state(const PipeEnd& end) const {
    const auto& p = pipes_[end.pipe];
    return end.side == Side::incoming ? p.last() : p.first();
}

void GasNetwork::fill(const GasState& u) {
    for (std::size_t p = 0; p < pipes_.size(); ++p) fill_pipe(p, u);
}

void GasNetwork::fill_pipe(std::size_t pipe, const GasState& u) {
    auto& p = pipes_.at(pipe);
    p.rho.setConstant(u.rho);
    p.q.setConstant(u.q);
}

double GasNetwork::total_mass() const {
    double m = 0.0;
    for (const auto& p : pipes_) {
        double s = p.rho.sum();
        if (p.layout == GridLayout::nodal) s -= 0.5 * (p.rho[0] + p.rho[p.rho.size() - 1]);
        m += s * p.dx() * p.geometry.area();
    }
    return m;
}

bool GasNetwork::all_subsonic() const {
    for (const auto& p : pipes_) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!is_subsonic(p.state(j), law_)) return false;
        }
    }
    return true;
}

}  // namespace gaspower
