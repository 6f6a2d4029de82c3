#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace gaspower::power {

enum class BusKind { pq, pv, slack };

std::string_view to_string(BusKind kind) noexcept;

// Quantities in per unit; angles in radians. P and Q are net injections, so
// loads are negative.
struct Bus {
    std::string id;
    BusKind kind = BusKind::pq;
    double P = 0.0;
    double Q = 0.0;
    double vm = 1.0;
    double va = 0.0;
    double G = 0.0;  // diagonal admittance entry G_kk
    double B = 0.0;  // diagonal admittance entry B_kk

    friend bool operator==(const Bus&, const Bus&) = default;
};

struct TransmissionLine {
    std::string id;
    std::string from;
    std::string to;
    double G = 0.0;  // off-diagonal entry G_kj
    double B = 0.0;

    friend bool operator==(const TransmissionLine&, const TransmissionLine&) = default;
};

struct PowerGrid {
    std::vector<Bus> buses;
    std::vector<TransmissionLine> lines;
    double base_mva = 100.0;

    std::size_t bus_index(const std::string& id) const;
    std::size_t slack_index() const;

    friend bool operator==(const PowerGrid&, const PowerGrid&) = default;
};

struct Admittance {
    Eigen::MatrixXd G;
    Eigen::MatrixXd B;
};

// Off-diagonal entries from the lines, diagonal entries from the bus records.
Admittance build_admittance(const PowerGrid& grid);

// Checks one slack bus, unique ids, valid line endpoints and connectivity.
void validate(const PowerGrid& grid);

// Injected power at every bus for voltage magnitudes vm and angles va.
void injections(const Admittance& y, const Eigen::VectorXd& vm, const Eigen::VectorXd& va, Eigen::VectorXd& P,
                Eigen::VectorXd& Q);

// Ordering of the Newton unknowns: angles of all non-slack buses, then
// magnitudes of all PQ buses. Mismatch rows follow the same order (P then Q).
struct UnknownLayout {
    std::vector<std::size_t> angle_buses;
    std::vector<std::size_t> magnitude_buses;
    std::size_t size() const noexcept { return angle_buses.size() + magnitude_buses.size(); }
};

UnknownLayout unknown_layout(const PowerGrid& grid);

// Specified minus computed power: Delta P for non-slack, Delta Q for PQ buses.
Eigen::VectorXd mismatch(const PowerGrid& grid, const Admittance& y, const Eigen::VectorXd& vm,
                         const Eigen::VectorXd& va);

// Jacobian of the computed injections with respect to (angles, magnitudes),
// i.e. minus the Jacobian of mismatch().
Eigen::MatrixXd mismatch_jacobian(const PowerGrid& grid, const Admittance& y, const Eigen::VectorXd& vm,
                                  const Eigen::VectorXd& va);

enum class InitialGuess { flat, warm };

struct PowerFlowOptions {
    double tolerance = 1e-8;
    int max_iterations = 30;
};

struct PowerFlowSolution {
    Eigen::VectorXd vm;
    Eigen::VectorXd va;
    Eigen::VectorXd P;
    Eigen::VectorXd Q;
    int iterations = 0;
    double mismatch = 0.0;

    // Grid copy with every bus carrying the solved (P, Q, |V|, angle).
    PowerGrid apply(const PowerGrid& grid) const;
};

PowerFlowSolution solve_newton(const PowerGrid& grid, InitialGuess initial = InitialGuess::flat,
                               const PowerFlowOptions& options = {});

}  // namespace gaspower::power
