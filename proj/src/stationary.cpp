#include "gaspower/coupling.hpp"
#include "gaspower/error.hpp"

#include <algorithm>
#include <sstream>

namespace gaspower {

StationaryResult find_stationary_state(GasNetwork& net, double t, const StationaryOptions& options) {
    if (net.layout() != GridLayout::nodal) {
        throw Error(ErrorCategory::config, "stationary search needs the nodal layout");
    }
    IboxSolver solver(net);
    StationaryResult result;
    double dt = options.initial_dt;
    std::vector<Eigen::ArrayXd> rho;
    std::vector<Eigen::ArrayXd> q;
    for (int n = 0; n < options.max_steps; ++n) {
        rho.clear();
        q.clear();
        for (const auto& p : net.pipes()) {
            rho.push_back(p.rho);
            q.push_back(p.q);
        }
        try {
            // Boundary data are evaluated at the end of the step, i.e. at t.
            result.last = solver.step(t - dt, dt);
        } catch (const Error& e) {
            if (e.category() != ErrorCategory::step_failure && e.category() != ErrorCategory::inadmissible) throw;
            dt *= 0.5;
            if (dt < 1e-12 * options.initial_dt) throw;
            continue;
        }
        ++result.steps;
        double change = 0.0;
        for (std::size_t p = 0; p < net.pipes().size(); ++p) {
            change = std::max(change, (net.pipes()[p].rho - rho[p]).abs().maxCoeff());
            change = std::max(change, (net.pipes()[p].q - q[p]).abs().maxCoeff());
        }
        result.rate = change / dt;
        if (result.rate < options.tolerance) return result;
        dt = std::min(dt * options.growth, options.max_dt);
    }
    std::ostringstream os;
    os << "no stationary state after " << options.max_steps << " pseudo-time steps (rate " << result.rate << ")";
    throw Error(ErrorCategory::step_failure, os.str());
}

}  // namespace gaspower
