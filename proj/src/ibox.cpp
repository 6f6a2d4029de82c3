#include "gaspower/error.hpp"
#include "gaspower/friction.hpp"
#include "gaspower/gasdyn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaspower {

namespace {

// Per-node quantities entering the box equations.
struct NodalTerms {
    double flux = 0.0;  // p + q^2/rho
    double flux_drho = 0.0;
    double flux_dq = 0.0;
    double source = 0.0;
    double source_drho = 0.0;
    double source_dq = 0.0;
    double g_rho = 0.0;  // external forcing
    double g_q = 0.0;
};

}  // namespace

struct IboxSolver::Impl {
    std::vector<std::size_t> offset;
    std::size_t size = 0;
    std::vector<Eigen::ArrayXd> rho_old;
    std::vector<Eigen::ArrayXd> q_old;
    std::vector<std::vector<NodalTerms>> terms;
    Eigen::VectorXd x;
    Eigen::VectorXd residual;
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::SparseMatrix<double> jacobian;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;

    double rho_ref = 1.0;
    double q_ref = 1.0;
    double p_ref = 1.0;

    std::size_t unknown(std::size_t pipe, std::size_t j, int component) const {
        return offset[pipe] + 2 * j + static_cast<std::size_t>(component);
    }
    // Row of the node equation attached to a pipe end.
    std::size_t end_row(const GasNetwork& net, const PipeEnd& e) const {
        return e.side == Side::outgoing ? offset[e.pipe] : offset[e.pipe] + 2 * net.pipes()[e.pipe].cells + 1;
    }
    std::size_t end_index(const GasNetwork& net, const PipeEnd& e) const {
        return e.side == Side::outgoing ? 0 : net.pipes()[e.pipe].cells;
    }
};

IboxSolver::IboxSolver(GasNetwork& net, IboxOptions options)
    : net_(net), options_(std::move(options)), impl_(std::make_unique<Impl>()) {
    if (!net_.finalized() || net_.layout() != GridLayout::nodal) {
        throw Error(ErrorCategory::config, "IBOX needs a finalized network with nodal values");
    }
    auto& im = *impl_;
    for (const auto& p : net_.pipes()) {
        im.offset.push_back(im.size);
        im.size += 2 * (p.cells + 1);
        im.terms.emplace_back(p.cells + 1);
    }
    im.x.resize(static_cast<Eigen::Index>(im.size));
    im.residual.resize(static_cast<Eigen::Index>(im.size));
    im.jacobian.resize(static_cast<Eigen::Index>(im.size), static_cast<Eigen::Index>(im.size));
}

IboxSolver::~IboxSolver() = default;

std::size_t IboxSolver::unknowns() const noexcept { return impl_->size; }

namespace {

class Assembler {
public:
    Assembler(GasNetwork& net, IboxSolver::Impl& im, const IboxOptions& options, double t_new, double dt)
        : net_(net), im_(im), options_(options), t_(t_new), dt_(dt) {}

    void scatter(const Eigen::VectorXd& x) {
        for (std::size_t p = 0; p < net_.pipes().size(); ++p) {
            auto& pipe = net_.pipes()[p];
            for (std::size_t j = 0; j < pipe.size(); ++j) {
                pipe.rho[static_cast<Eigen::Index>(j)] = x[static_cast<Eigen::Index>(im_.unknown(p, j, 0))];
                pipe.q[static_cast<Eigen::Index>(j)] = x[static_cast<Eigen::Index>(im_.unknown(p, j, 1))];
            }
        }
    }

    void gather(Eigen::VectorXd& x) const {
        for (std::size_t p = 0; p < net_.pipes().size(); ++p) {
            const auto& pipe = net_.pipes()[p];
            for (std::size_t j = 0; j < pipe.size(); ++j) {
                x[static_cast<Eigen::Index>(im_.unknown(p, j, 0))] = pipe.rho[static_cast<Eigen::Index>(j)];
                x[static_cast<Eigen::Index>(im_.unknown(p, j, 1))] = pipe.q[static_cast<Eigen::Index>(j)];
            }
        }
    }

    // Scaled residual (and Jacobian triplets if requested) at the current network state.
    void assemble(bool with_jacobian) {
        const auto& law = net_.law();
        auto& r = im_.residual;
        auto& trip = im_.triplets;
        trip.clear();
        auto add = [&](std::size_t row, std::size_t col, double v) {
            if (with_jacobian) trip.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
        };

        const bool friction = net_.source().friction;
        const double eta = net_.source().viscosity;
        for (std::size_t p = 0; p < net_.pipes().size(); ++p) {
            const auto& pipe = net_.pipes()[p];
            auto& terms = im_.terms[p];
            for (std::size_t j = 0; j < pipe.size(); ++j) {
                const double rho = pipe.rho[static_cast<Eigen::Index>(j)];
                const double q = pipe.q[static_cast<Eigen::Index>(j)];
                auto& tm = terms[j];
                const double u = q / rho;
                tm.flux = law.pressure(rho) + q * u;
                tm.flux_drho = law.dp(rho) - u * u;
                tm.flux_dq = 2.0 * u;
                if (friction) {
                    const FrictionTerm f = friction_source_jacobian(rho, q, pipe.geometry, eta);
                    tm.source = f.value;
                    tm.source_drho = f.drho;
                    tm.source_dq = f.dq;
                }
                if (options_.forcing) {
                    const GasState g = options_.forcing(pipe.x(j), t_, p);
                    tm.g_rho = g.rho;
                    tm.g_q = g.q;
                }
            }
        }

        const double sc = 1.0 / im_.rho_ref;
        const double sm = 1.0 / im_.q_ref;
        for (std::size_t p = 0; p < net_.pipes().size(); ++p) {
            const auto& pipe = net_.pipes()[p];
            const auto& terms = im_.terms[p];
            const auto& rho0 = im_.rho_old[p];
            const auto& q0 = im_.q_old[p];
            const double k = dt_ / pipe.dx();
            const double h = 0.5 * dt_;
            for (std::size_t j = 1; j <= pipe.cells; ++j) {
                const auto a = static_cast<Eigen::Index>(j - 1);
                const auto b = static_cast<Eigen::Index>(j);
                const auto& ta = terms[j - 1];
                const auto& tb = terms[j];
                const std::size_t row = im_.offset[p] + 1 + 2 * (j - 1);
                const std::size_t ra = im_.unknown(p, j - 1, 0);
                const std::size_t qa = ra + 1;
                const std::size_t rb = im_.unknown(p, j, 0);
                const std::size_t qb = rb + 1;

                const double rc = 0.5 * (pipe.rho[a] + pipe.rho[b]) - 0.5 * (rho0[a] + rho0[b]) +
                                  k * (pipe.q[b] - pipe.q[a]) - h * (ta.g_rho + tb.g_rho);
                r[static_cast<Eigen::Index>(row)] = sc * rc;
                add(row, ra, sc * 0.5);
                add(row, qa, -sc * k);
                add(row, rb, sc * 0.5);
                add(row, qb, sc * k);

                const double rm = 0.5 * (pipe.q[a] + pipe.q[b]) - 0.5 * (q0[a] + q0[b]) + k * (tb.flux - ta.flux) -
                                  h * (ta.source + tb.source) - h * (ta.g_q + tb.g_q);
                r[static_cast<Eigen::Index>(row + 1)] = sm * rm;
                add(row + 1, ra, sm * (-k * ta.flux_drho - h * ta.source_drho));
                add(row + 1, qa, sm * (0.5 - k * ta.flux_dq - h * ta.source_dq));
                add(row + 1, rb, sm * (k * tb.flux_drho - h * tb.source_drho));
                add(row + 1, qb, sm * (0.5 + k * tb.flux_dq - h * tb.source_dq));
            }
        }

        for (std::size_t n = 0; n < net_.nodes().size(); ++n) node_equations(n, add);
    }

    template <class Add>
    void node_equations(std::size_t n, Add&& add) {
        const auto& law = net_.law();
        const auto& node = net_.nodes()[n];
        const auto& ends = net_.incident(n);
        auto& r = im_.residual;
        auto value = [&](const PipeEnd& e, int comp) {
            const auto& pipe = net_.pipes()[e.pipe];
            const auto j = static_cast<Eigen::Index>(im_.end_index(net_, e));
            return comp == 0 ? pipe.rho[j] : pipe.q[j];
        };
        auto column = [&](const PipeEnd& e, int comp) { return im_.unknown(e.pipe, im_.end_index(net_, e), comp); };

        switch (node.kind) {
            case NodeKind::periodic: {
                // ends[0] is the pipe start, ends[1] its end.
                const std::size_t row_a = im_.end_row(net_, ends[0]);
                const std::size_t row_b = im_.end_row(net_, ends[1]);
                r[static_cast<Eigen::Index>(row_a)] = (value(ends[1], 0) - value(ends[0], 0)) / im_.rho_ref;
                add(row_a, column(ends[1], 0), 1.0 / im_.rho_ref);
                add(row_a, column(ends[0], 0), -1.0 / im_.rho_ref);
                r[static_cast<Eigen::Index>(row_b)] = (value(ends[1], 1) - value(ends[0], 1)) / im_.q_ref;
                add(row_b, column(ends[1], 1), 1.0 / im_.q_ref);
                add(row_b, column(ends[0], 1), -1.0 / im_.q_ref);
                break;
            }
            case NodeKind::pressure: {
                const double rho_b = law.density_at(node.pressure(t_));
                for (const auto& e : ends) {
                    const std::size_t row = im_.end_row(net_, e);
                    r[static_cast<Eigen::Index>(row)] = (value(e, 0) - rho_b) / im_.rho_ref;
                    add(row, column(e, 0), 1.0 / im_.rho_ref);
                }
                break;
            }
            case NodeKind::junction: {
                const std::size_t row0 = im_.end_row(net_, ends[0]);
                double mass = -net_.extraction(n, t_);
                for (const auto& e : ends) {
                    const double sign = e.side == Side::incoming ? 1.0 : -1.0;
                    mass += sign * value(e, 1);
                    add(row0, column(e, 1), sign / im_.q_ref);
                }
                r[static_cast<Eigen::Index>(row0)] = mass / im_.q_ref;
                const double r0 = net_.pressure_ratio(n, ends[0]);
                const double rho0 = value(ends[0], 0);
                const double p0 = law.pressure(rho0) / r0;
                const double dp0 = law.dp(rho0) / r0;
                for (std::size_t i = 1; i < ends.size(); ++i) {
                    const std::size_t row = im_.end_row(net_, ends[i]);
                    const double ri = net_.pressure_ratio(n, ends[i]);
                    const double rho_i = value(ends[i], 0);
                    r[static_cast<Eigen::Index>(row)] = (law.pressure(rho_i) / ri - p0) / im_.p_ref;
                    add(row, column(ends[i], 0), law.dp(rho_i) / ri / im_.p_ref);
                    add(row, column(ends[0], 0), -dp0 / im_.p_ref);
                }
                break;
            }
        }
    }

private:
    GasNetwork& net_;
    IboxSolver::Impl& im_;
    const IboxOptions& options_;
    double t_;
    double dt_;
};

}  // namespace

StepReport IboxSolver::step(double t, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorCategory::domain, "time step must be positive");
    auto& im = *impl_;
    const auto& law = net_.law();
    auto& pipes = net_.pipes();

    StepReport report;
    im.rho_old.resize(pipes.size());
    im.q_old.resize(pipes.size());
    double rho_max = 0.0;
    double q_max = 0.0;
    double min_speed = std::numeric_limits<double>::infinity();
    double min_dx = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < pipes.size(); ++p) {
        im.rho_old[p] = pipes[p].rho;
        im.q_old[p] = pipes[p].q;
        rho_max = std::max(rho_max, pipes[p].rho.maxCoeff());
        q_max = std::max(q_max, pipes[p].q.abs().maxCoeff());
        min_dx = std::min(min_dx, pipes[p].dx());
        for (std::size_t j = 0; j < pipes[p].size(); ++j) {
            const GasState u = pipes[p].state(j);
            const double c = law.sound_speed(u.rho);
            min_speed = std::min(min_speed, c - std::abs(u.q / u.rho));
            report.courant = std::max(report.courant, dt * (c + std::abs(u.q / u.rho)) / pipes[p].dx());
        }
    }
    report.inverse_cfl_violated = dt * min_speed < min_dx;
    const double c_ref = law.sound_speed(rho_max);
    im.rho_ref = rho_max;
    im.q_ref = std::max(q_max, rho_max * c_ref);
    im.p_ref = rho_max * c_ref * c_ref;

    Assembler asm_(net_, im, options_, t + dt, dt);
    asm_.gather(im.x);
    auto restore = [&] {
        for (std::size_t p = 0; p < pipes.size(); ++p) {
            pipes[p].rho = im.rho_old[p];
            pipes[p].q = im.q_old[p];
        }
    };

    auto fail = [&](const std::string& why) {
        restore();
        std::ostringstream os;
        os << "implicit step at t=" << t << " with dt=" << dt << " failed: " << why;
        throw Error(ErrorCategory::step_failure, os.str());
    };

    try {
        asm_.assemble(true);
        double norm = im.residual.lpNorm<Eigen::Infinity>();
        int it = 0;
        while (!(norm <= options_.tolerance)) {
            if (it == options_.max_iterations) {
                std::ostringstream os;
                os << "no convergence in " << it << " Newton iterations (residual " << norm << ")";
                fail(os.str());
            }
            ++it;
            im.jacobian.setFromTriplets(im.triplets.begin(), im.triplets.end());
            if (!im.analyzed) {
                im.lu.analyzePattern(im.jacobian);
                im.analyzed = true;
            }
            im.lu.factorize(im.jacobian);
            if (im.lu.info() != Eigen::Success) fail("singular Jacobian");
            const Eigen::VectorXd delta = im.lu.solve(-im.residual);
            if (!delta.allFinite()) fail("non-finite Newton update");

            // Backtracking on the scaled residual; densities must stay positive.
            const Eigen::VectorXd x0 = im.x;
            double alpha = 1.0;
            bool accepted = false;
            for (int k = 0; k < 30; ++k, alpha *= 0.5) {
                im.x = x0 + alpha * delta;
                bool positive = true;
                for (std::size_t p = 0; p < pipes.size() && positive; ++p) {
                    for (std::size_t j = 0; j <= pipes[p].cells; ++j) {
                        if (!(im.x[static_cast<Eigen::Index>(im.unknown(p, j, 0))] > 0.0)) {
                            positive = false;
                            break;
                        }
                    }
                }
                if (!positive) continue;
                asm_.scatter(im.x);
                asm_.assemble(false);
                const double trial = im.residual.lpNorm<Eigen::Infinity>();
                if (std::isfinite(trial) && (trial < (1.0 - 1e-4 * alpha) * norm || alpha < 1e-3)) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) fail("line search found no decrease");
            asm_.assemble(true);
            norm = im.residual.lpNorm<Eigen::Infinity>();
        }
        report.newton_iterations = it;
        report.residual = norm;
    } catch (const LawEvaluationError& e) {
        fail(e.what());
    }

    double outflow = 0.0;
    for (const auto& p : pipes) {
        outflow += p.geometry.area() * (p.q[p.q.size() - 1] - p.q[0]);
    }
    report.boundary_outflow = dt * outflow;

    report.node_solutions.resize(net_.nodes().size());
    for (std::size_t n = 0; n < net_.nodes().size(); ++n) {
        const auto& node = net_.nodes()[n];
        if (node.kind == NodeKind::periodic) continue;
        const auto& ends = net_.incident(n);
        JunctionSolution sol;
        sol.epsilon = node.kind == NodeKind::junction ? net_.extraction(n, t + dt) : 0.0;
        for (const auto& e : ends) {
            const GasState v = net_.end_state(e);
            sol.initial.push_back(v);
            sol.sides.push_back(e.side);
            sol.ratios.push_back(net_.pressure_ratio(n, e));
            sol.traces.push_back(v);
            sol.waves.push_back(WaveType::rarefaction);
            if (node.kind == NodeKind::pressure) sol.epsilon += e.side == Side::incoming ? v.q : -v.q;
        }
        sol.rho_star = sol.ratios[0] == 1.0 ? sol.traces[0].rho
                                            : law.density_at(law.pressure(sol.traces[0].rho) / sol.ratios[0]);
        sol.admissible = true;
        sol.subsonic_traces = true;
        for (const auto& v : sol.traces) sol.subsonic_traces = sol.subsonic_traces && is_subsonic(v, law);
        report.node_solutions[n] = std::move(sol);
    }

    for (const auto& p : pipes) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!is_subsonic(p.state(j), law)) {
                restore();
                std::ostringstream os;
                os << "state in pipe '" << p.id << "' node " << j << " is not sub-sonic after the step at t=" << t;
                throw Error(ErrorCategory::inadmissible, os.str());
            }
        }
    }
    return report;
}

StepReport ibox_step(GasNetwork& net, double t, double dt, const IboxOptions& options) {
    IboxSolver solver(net, options);
    return solver.step(t, dt);
}

}  // namespace gaspower
