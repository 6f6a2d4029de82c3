#include "gaspower/powerflow.hpp"

#include "gaspower/error.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace gaspower::power {

std::string_view to_string(BusKind kind) noexcept {
    switch (kind) {
        case BusKind::pq: return "PQ";
        case BusKind::pv: return "PV";
        case BusKind::slack: return "slack";
    }
    return "?";
}

std::size_t PowerGrid::bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].id == id) return i;
    }
    throw Error(ErrorCategory::config, "unknown bus '" + id + "'");
}

std::size_t PowerGrid::slack_index() const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].kind == BusKind::slack) return i;
    }
    throw Error(ErrorCategory::config, "power grid has no slack bus");
}

void validate(const PowerGrid& grid) {
    if (grid.buses.empty()) throw Error(ErrorCategory::config, "power grid has no buses");
    std::set<std::string> ids;
    int slacks = 0;
    for (const auto& b : grid.buses) {
        if (!ids.insert(b.id).second) throw Error(ErrorCategory::config, "duplicate bus id '" + b.id + "'");
        if (b.kind == BusKind::slack) ++slacks;
        if (b.kind != BusKind::pq && !(b.vm > 0.0)) {
            throw Error(ErrorCategory::config, "bus '" + b.id + "' needs a positive voltage magnitude");
        }
    }
    if (slacks != 1) throw Error(ErrorCategory::config, "power grid needs exactly one slack bus");

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::vector<std::size_t>> adj(grid.buses.size());
    for (const auto& l : grid.lines) {
        const std::size_t a = grid.bus_index(l.from);
        const std::size_t b = grid.bus_index(l.to);
        if (a == b) throw Error(ErrorCategory::config, "line '" + l.id + "' connects a bus to itself");
        if (!pairs.insert({std::min(a, b), std::max(a, b)}).second) {
            throw Error(ErrorCategory::config, "duplicate line between '" + l.from + "' and '" + l.to + "'");
        }
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> seen(grid.buses.size(), false);
    std::vector<std::size_t> stack{grid.slack_index()};
    seen[stack.back()] = true;
    while (!stack.empty()) {
        const std::size_t k = stack.back();
        stack.pop_back();
        for (std::size_t j : adj[k]) {
            if (!seen[j]) {
                seen[j] = true;
                stack.push_back(j);
            }
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) throw Error(ErrorCategory::config, "bus '" + grid.buses[i].id + "' is not connected to the slack");
    }
}

Admittance build_admittance(const PowerGrid& grid) {
    validate(grid);
    const auto n = static_cast<Eigen::Index>(grid.buses.size());
    Admittance y{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        y.G(k, k) = grid.buses[static_cast<std::size_t>(k)].G;
        y.B(k, k) = grid.buses[static_cast<std::size_t>(k)].B;
    }
    for (const auto& l : grid.lines) {
        const auto a = static_cast<Eigen::Index>(grid.bus_index(l.from));
        const auto b = static_cast<Eigen::Index>(grid.bus_index(l.to));
        y.G(a, b) = y.G(b, a) = l.G;
        y.B(a, b) = y.B(b, a) = l.B;
    }
    return y;
}

void injections(const Admittance& y, const Eigen::VectorXd& vm, const Eigen::VectorXd& va, Eigen::VectorXd& P,
                Eigen::VectorXd& Q) {
    const Eigen::Index n = vm.size();
    P.setZero(n);
    Q.setZero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (y.G(k, j) == 0.0 && y.B(k, j) == 0.0) continue;
            const double th = va[k] - va[j];
            const double c = std::cos(th);
            const double s = std::sin(th);
            P[k] += vm[k] * vm[j] * (y.G(k, j) * c + y.B(k, j) * s);
            Q[k] += vm[k] * vm[j] * (y.G(k, j) * s - y.B(k, j) * c);
        }
    }
}

UnknownLayout unknown_layout(const PowerGrid& grid) {
    UnknownLayout u;
    for (std::size_t i = 0; i < grid.buses.size(); ++i) {
        if (grid.buses[i].kind != BusKind::slack) u.angle_buses.push_back(i);
        if (grid.buses[i].kind == BusKind::pq) u.magnitude_buses.push_back(i);
    }
    return u;
}

Eigen::VectorXd mismatch(const PowerGrid& grid, const Admittance& y, const Eigen::VectorXd& vm,
                         const Eigen::VectorXd& va) {
    Eigen::VectorXd P;
    Eigen::VectorXd Q;
    injections(y, vm, va, P, Q);
    const UnknownLayout u = unknown_layout(grid);
    Eigen::VectorXd r(static_cast<Eigen::Index>(u.size()));
    Eigen::Index row = 0;
    for (std::size_t k : u.angle_buses) r[row++] = grid.buses[k].P - P[static_cast<Eigen::Index>(k)];
    for (std::size_t k : u.magnitude_buses) r[row++] = grid.buses[k].Q - Q[static_cast<Eigen::Index>(k)];
    return r;
}

Eigen::MatrixXd mismatch_jacobian(const PowerGrid& grid, const Admittance& y, const Eigen::VectorXd& vm,
                                  const Eigen::VectorXd& va) {
    Eigen::VectorXd P;
    Eigen::VectorXd Q;
    injections(y, vm, va, P, Q);
    const UnknownLayout u = unknown_layout(grid);
    const Eigen::Index na = static_cast<Eigen::Index>(u.angle_buses.size());
    const Eigen::Index n = static_cast<Eigen::Index>(u.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);

    // Partial derivatives of P_k and Q_k with respect to angle / magnitude of bus m.
    auto dP_dva = [&](Eigen::Index k, Eigen::Index m) {
        if (k == m) return -Q[k] - y.B(k, k) * vm[k] * vm[k];
        const double th = va[k] - va[m];
        return vm[k] * vm[m] * (y.G(k, m) * std::sin(th) - y.B(k, m) * std::cos(th));
    };
    auto dQ_dva = [&](Eigen::Index k, Eigen::Index m) {
        if (k == m) return P[k] - y.G(k, k) * vm[k] * vm[k];
        const double th = va[k] - va[m];
        return -vm[k] * vm[m] * (y.G(k, m) * std::cos(th) + y.B(k, m) * std::sin(th));
    };
    auto dP_dvm = [&](Eigen::Index k, Eigen::Index m) {
        if (k == m) return P[k] / vm[k] + y.G(k, k) * vm[k];
        const double th = va[k] - va[m];
        return vm[k] * (y.G(k, m) * std::cos(th) + y.B(k, m) * std::sin(th));
    };
    auto dQ_dvm = [&](Eigen::Index k, Eigen::Index m) {
        if (k == m) return Q[k] / vm[k] - y.B(k, k) * vm[k];
        const double th = va[k] - va[m];
        return vm[k] * (y.G(k, m) * std::sin(th) - y.B(k, m) * std::cos(th));
    };

    for (Eigen::Index r = 0; r < n; ++r) {
        const bool p_row = r < na;
        const auto k = static_cast<Eigen::Index>(p_row ? u.angle_buses[static_cast<std::size_t>(r)]
                                                       : u.magnitude_buses[static_cast<std::size_t>(r - na)]);
        for (Eigen::Index c = 0; c < n; ++c) {
            const bool a_col = c < na;
            const auto m = static_cast<Eigen::Index>(a_col ? u.angle_buses[static_cast<std::size_t>(c)]
                                                           : u.magnitude_buses[static_cast<std::size_t>(c - na)]);
            if (k != m && y.G(k, m) == 0.0 && y.B(k, m) == 0.0) continue;
            if (p_row) {
                J(r, c) = a_col ? dP_dva(k, m) : dP_dvm(k, m);
            } else {
                J(r, c) = a_col ? dQ_dva(k, m) : dQ_dvm(k, m);
            }
        }
    }
    return J;
}

PowerGrid PowerFlowSolution::apply(const PowerGrid& grid) const {
    PowerGrid out = grid;
    for (std::size_t i = 0; i < out.buses.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out.buses[i].P = P[k];
        out.buses[i].Q = Q[k];
        out.buses[i].vm = vm[k];
        out.buses[i].va = va[k];
    }
    return out;
}

PowerFlowSolution solve_newton(const PowerGrid& grid, InitialGuess initial, const PowerFlowOptions& options) {
    const Admittance y = build_admittance(grid);
    const UnknownLayout u = unknown_layout(grid);
    const auto n = static_cast<Eigen::Index>(grid.buses.size());
    const auto na = static_cast<Eigen::Index>(u.angle_buses.size());

    PowerFlowSolution sol;
    sol.vm.resize(n);
    sol.va.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Bus& b = grid.buses[static_cast<std::size_t>(k)];
        const bool flat = initial == InitialGuess::flat;
        sol.vm[k] = (b.kind == BusKind::pq && flat) ? 1.0 : b.vm;
        sol.va[k] = (b.kind != BusKind::slack && flat) ? 0.0 : b.va;
    }

    Eigen::VectorXd r = mismatch(grid, y, sol.vm, sol.va);
    double norm = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
    int it = 0;
    while (!(norm <= options.tolerance)) {
        if (it == options.max_iterations || !std::isfinite(norm)) {
            std::ostringstream os;
            os << "power flow did not converge in " << it << " iterations (mismatch " << norm << " p.u.)";
            throw Error(ErrorCategory::divergence, os.str());
        }
        ++it;
        const Eigen::MatrixXd J = mismatch_jacobian(grid, y, sol.vm, sol.va);
        const Eigen::VectorXd dx = J.partialPivLu().solve(r);
        for (Eigen::Index i = 0; i < na; ++i) sol.va[static_cast<Eigen::Index>(u.angle_buses[i])] += dx[i];
        for (std::size_t i = 0; i < u.magnitude_buses.size(); ++i) {
            sol.vm[static_cast<Eigen::Index>(u.magnitude_buses[i])] += dx[na + static_cast<Eigen::Index>(i)];
        }
        r = mismatch(grid, y, sol.vm, sol.va);
        norm = r.lpNorm<Eigen::Infinity>();
    }
    sol.iterations = it;
    sol.mismatch = norm;
    injections(y, sol.vm, sol.va, sol.P, sol.Q);
    return sol;
}

}  // namespace gaspower::power
