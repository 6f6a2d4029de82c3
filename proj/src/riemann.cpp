#include "gaspower/riemann.hpp"

#include "gaspower/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaspower {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Sum of the oriented Lax curves as a function of the junction density.
class JunctionFunction {
public:
    JunctionFunction(std::span<const JunctionPipe> pipes, const PressureLaw& law) : pipes_(pipes), law_(law) {
        if (pipes_.empty()) throw Error(ErrorCategory::domain, "junction needs at least one pipe");
        for (const auto& p : pipes_) {
            require_subsonic(p.state, law_);
            if (!(p.ratio > 0.0) || !std::isfinite(p.ratio)) {
                throw Error(ErrorCategory::domain, "pressure ratio must be positive");
            }
        }
    }

    double pipe_density(std::size_t i, double rho) const {
        const double r = pipes_[i].ratio;
        if (r == 1.0) return rho;
        return law_.density_at(r * law_.pressure(rho));
    }

    double junction_density(std::size_t i, double rho_pipe) const {
        const double r = pipes_[i].ratio;
        if (r == 1.0 || rho_pipe == 0.0) return rho_pipe;
        if (std::isinf(rho_pipe)) return rho_pipe;
        return law_.density_at(law_.pressure(rho_pipe) / r);
    }

    double term(std::size_t i, double rho) const {
        const auto& p = pipes_[i];
        const double v = lax_curve(p.side, pipe_density(i, rho), p.state, law_);
        return p.side == Side::incoming ? v : -v;
    }

    double phi0(double rho) const {
        double s = 0.0;
        for (std::size_t i = 0; i < pipes_.size(); ++i) s += term(i, rho);
        return s;
    }

    double rho_min_junction() const {
        double m = 0.0;
        for (std::size_t i = 0; i < pipes_.size(); ++i) {
            m = std::max(m, junction_density(i, rho_min(pipes_[i].state, pipes_[i].side, law_)));
        }
        return m;
    }

    double rho_max_junction() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pipes_.size(); ++i) {
            m = std::min(m, junction_density(i, rho_max(pipes_[i].state, pipes_[i].side, law_)));
        }
        return m;
    }

    // Left end of the admissible branch; a small positive density stands in
    // for rho_min = 0.
    double left_end(double rho_min_j) const {
        if (rho_min_j > 0.0) return rho_min_j;
        double m = pipes_[0].state.rho;
        for (std::size_t i = 0; i < pipes_.size(); ++i) {
            m = std::min(m, junction_density(i, pipes_[i].state.rho));
        }
        return 1e-9 * m;
    }

    // Derivative of phi0 (ratios of 1 only).
    double slope(double rho) const {
        double s = 0.0;
        for (const auto& p : pipes_) {
            const double d = lax_curve_deriv(p.side, rho, p.state, law_);
            s += p.side == Side::incoming ? d : -d;
        }
        return s;
    }

    // Maximizer of the concave phi0, i.e. the left end of its decreasing branch.
    double argmax(double lo) const {
        if (slope(lo) <= 0.0) return lo;
        double hi = std::max(2.0 * lo, max_density());
        for (int k = 0; slope(hi) > 0.0; ++k) {
            if (k == 80) throw Error(ErrorCategory::no_solution, "junction function increases up to rho = " + fmt(hi));
            hi *= 2.0;
        }
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve([this](double x) { return slope(x); }, lo, hi,
                                                         boost::math::tools::eps_tolerance<double>(50), iters);
        return 0.5 * (r.first + r.second);
    }

    double max_density() const {
        double m = 0.0;
        for (std::size_t i = 0; i < pipes_.size(); ++i) {
            m = std::max(m, junction_density(i, pipes_[i].state.rho));
        }
        return m;
    }

    std::span<const JunctionPipe> pipes() const { return pipes_; }

private:
    std::span<const JunctionPipe> pipes_;
    const PressureLaw& law_;
};

std::vector<JunctionPipe> two_pipes(const GasState& ul, const GasState& ur) {
    return {JunctionPipe{ul, Side::incoming, 1.0}, JunctionPipe{ur, Side::outgoing, 1.0}};
}

}  // namespace

double JunctionSolution::flux_residual() const {
    double s = -epsilon;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        s += sides[i] == Side::incoming ? traces[i].q : -traces[i].q;
    }
    return s;
}

namespace {

enum class Branch {
    admissible,  // rho > rho_min_junction: every wave leaves the junction
    decreasing,  // right of the maximizer of phi0: plain Lax-curve intersection
};

JunctionSolution solve_on_branch(std::span<const JunctionPipe> pipes, double extraction, const PressureLaw& law,
                                 const JunctionOptions& options, Branch branch) {
    if (!std::isfinite(extraction)) throw Error(ErrorCategory::domain, "extraction must be finite");
    const JunctionFunction phi(pipes, law);

    JunctionSolution sol;
    sol.epsilon = extraction;
    sol.rho_min_junction = phi.rho_min_junction();
    const double admissible_left = phi.left_end(sol.rho_min_junction);
    sol.max_extraction = phi.phi0(admissible_left);
    const double left = branch == Branch::admissible ? admissible_left : phi.argmax(phi.left_end(0.0));
    const double phi_left = branch == Branch::admissible ? sol.max_extraction : phi.phi0(left);

    if (!(extraction < phi_left)) {
        if (extraction > 0.0) throw InvalidDemandError(extraction, sol.max_extraction);
        if (branch == Branch::admissible || !(extraction == phi_left)) {
            throw Error(ErrorCategory::no_solution, "Lax curves do not intersect on the " +
                                                        std::string(branch == Branch::admissible ? "admissible"
                                                                                                 : "decreasing") +
                                                        " branch (maximum " + fmt(phi_left) + ", demand " +
                                                        fmt(extraction) + ")");
        }
    }

    auto g = [&](double rho) { return phi.phi0(rho) - extraction; };
    const double g_left = phi_left - extraction;
    double hi = std::max(2.0 * left, phi.max_density());
    double g_hi = g(hi);
    for (int k = 0; g_hi > 0.0; ++k) {
        if (k == 80) {
            throw Error(ErrorCategory::no_solution, "junction function stays positive up to rho = " + fmt(hi));
        }
        hi *= 2.0;
        g_hi = g(hi);
    }

    double rho_star = hi;
    if (g_left == 0.0) {
        rho_star = left;
    } else if (g_hi != 0.0) {
        std::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(g, left, hi, g_left, g_hi,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
        const double ga = std::abs(g(r.first));
        const double gb = std::abs(g(r.second));
        rho_star = ga <= gb ? r.first : r.second;
        if (rho_star <= left && branch == Branch::admissible) rho_star = r.second;
    }
    sol.rho_star = rho_star;
    sol.admissible = rho_star > sol.rho_min_junction;

    const std::size_t n = pipes.size();
    sol.initial.reserve(n);
    sol.sides.reserve(n);
    sol.ratios.reserve(n);
    sol.traces.reserve(n);
    sol.waves.reserve(n);
    bool subsonic = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = pipes[i];
        const double rho_i = phi.pipe_density(i, rho_star);
        const GasState v{rho_i, lax_curve(p.side, rho_i, p.state, law)};
        sol.initial.push_back(p.state);
        sol.sides.push_back(p.side);
        sol.ratios.push_back(p.ratio);
        sol.traces.push_back(v);
        sol.waves.push_back(wave_type(rho_i, p.state));
        subsonic = subsonic && is_subsonic(v, law);
    }
    if (options.compute_rho_max) {
        sol.rho_max_junction = phi.rho_max_junction();
        subsonic = subsonic && rho_star < sol.rho_max_junction;
    }
    sol.subsonic_traces = subsonic;
    return sol;
}

}  // namespace

JunctionSolution solve_junction(std::span<const JunctionPipe> pipes, double extraction, const PressureLaw& law,
                                const JunctionOptions& options) {
    return solve_on_branch(pipes, extraction, law, options, Branch::admissible);
}

JunctionSolution solve_interface(const GasState& ul, const GasState& ur, const PressureLaw& law) {
    const auto pipes = two_pipes(ul, ur);
    return solve_on_branch(pipes, 0.0, law, {}, Branch::decreasing);
}

JunctionSolution solve_gas_power_junction(const GasState& ul, const GasState& ur, double epsilon,
                                          const PressureLaw& law) {
    if (!(epsilon >= 0.0)) throw Error(ErrorCategory::domain, "gas-power extraction must be nonnegative");
    const auto pipes = two_pipes(ul, ur);
    return solve_junction(pipes, epsilon, law);
}

JunctionSolution solve_multi_junction(std::span<const GasState> incoming, std::span<const GasState> outgoing,
                                      double epsilon, const PressureLaw& law) {
    if (!(epsilon >= 0.0)) throw Error(ErrorCategory::domain, "junction extraction must be nonnegative");
    std::vector<JunctionPipe> pipes;
    for (const auto& u : incoming) pipes.push_back({u, Side::incoming, 1.0});
    for (const auto& u : outgoing) pipes.push_back({u, Side::outgoing, 1.0});
    return solve_junction(pipes, epsilon, law);
}

double max_extraction(const GasState& ul, const GasState& ur, const PressureLaw& law) {
    const auto pipes = two_pipes(ul, ur);
    const JunctionFunction phi(pipes, law);
    return phi.phi0(phi.left_end(phi.rho_min_junction()));
}

WaveThresholds wave_thresholds(const GasState& ul, const GasState& ur, const PressureLaw& law) {
    const auto pipes = two_pipes(ul, ur);
    const JunctionFunction phi(pipes, law);
    WaveThresholds t;
    const double rho_min_j = phi.rho_min_junction();
    t.max_extraction = phi.phi0(phi.left_end(rho_min_j));
    // Below rho_min_j the branch is not admissible; the thresholds saturate.
    auto at = [&](double rho) { return rho > rho_min_j ? phi.phi0(rho) : t.max_extraction; };
    t.shock_shock_upper = at(std::max(ul.rho, ur.rho));
    t.mixed_upper = at(std::min(ul.rho, ur.rho));
    return t;
}

GasState sample_solution(const JunctionSolution& sol, double xi, const PressureLaw& law) {
    if (sol.traces.size() != 2 || sol.sides[0] != Side::incoming || sol.sides[1] != Side::outgoing) {
        throw Error(ErrorCategory::domain, "sampling needs one incoming and one outgoing pipe");
    }
    if (sol.ratios[0] != 1.0 || sol.ratios[1] != 1.0) {
        throw Error(ErrorCategory::domain, "sampling does not support compressor junctions");
    }
    if (!sol.admissible) throw Error(ErrorCategory::inadmissible, "cannot sample an inadmissible solution");

    auto fan = [&](auto&& speed, double lo, double hi) {
        double a = std::min(lo, hi);
        double b = std::max(lo, hi);
        const double fa = speed(a);
        const double fb = speed(b);
        if (fa == 0.0) return a;
        if (fb == 0.0) return b;
        std::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(speed, a, b, fa, fb,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
        return 0.5 * (r.first + r.second);
    };

    if (xi < 0.0) {
        const GasState& u = sol.initial[0];
        const GasState& v = sol.traces[0];
        if (v.rho == u.rho) return v;
        if (v.rho < u.rho) {
            if (xi < lambda1(u, law)) return u;
            if (xi >= lambda1(v, law)) return v;
            const double rho = fan([&](double r) { return lax_left_deriv(r, u, law) - xi; }, v.rho, u.rho);
            return {rho, lax_left(rho, u, law)};
        }
        const double s = (u.q - v.q) / (u.rho - v.rho);
        return xi < s ? u : v;
    }

    const GasState& u = sol.initial[1];
    const GasState& v = sol.traces[1];
    if (v.rho == u.rho) return v;
    if (v.rho < u.rho) {
        if (xi < lambda2(v, law)) return v;
        if (xi >= lambda2(u, law)) return u;
        const double rho = fan([&](double r) { return lax_right_deriv(r, u, law) - xi; }, v.rho, u.rho);
        return {rho, lax_right(rho, u, law)};
    }
    const double s = (u.q - v.q) / (u.rho - v.rho);
    return xi < s ? v : u;
}

}  // namespace gaspower
